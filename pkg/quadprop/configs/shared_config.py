from easydict import EasyDict

#------------------------ shared defaults ------------------------#
quadprop_shared_cfg = EasyDict()

# system
quadprop_shared_cfg.system = EasyDict(mass=1.0, hbar=1.0, omega=None)

# potential
quadprop_shared_cfg.potential = EasyDict(family='custom',
                                         a=1.0,
                                         q=0.0,
                                         r=1.0,
                                         drive=None,
                                         c_expr=None,
                                         e_expr=None,
                                         a1=None,
                                         a2=None,
                                         a3=None,
                                         a4=None)
quadprop_shared_cfg.parameters = EasyDict()

# initial state: 'matched' means lambda0 = m omega / hbar
quadprop_shared_cfg.initial = EasyDict(width='matched')

# integration
quadprop_shared_cfg.integration = EasyDict(t_max=None, u_max=None, step=0.01, rtol=1e-12, atol=1e-14)

# outputs
quadprop_shared_cfg.outputs = EasyDict(columns=None, n_max=6, path=None, format='csv', summary=True)

# kernel grid at fixed t
quadprop_shared_cfg.kernel = EasyDict(t=None,
                                      x_min=-2.0,
                                      x_max=2.0,
                                      x_points=21,
                                      xp_min=-2.0,
                                      xp_max=2.0,
                                      xp_points=21)

# wigner grid at fixed t
quadprop_shared_cfg.wigner = EasyDict(t=None,
                                      x_min=-4.0,
                                      x_max=4.0,
                                      x_points=41,
                                      p_min=-4.0,
                                      p_max=4.0,
                                      p_points=41)

# (a, q) stability scan
quadprop_shared_cfg.scan = EasyDict(a_min=None,
                                    a_max=None,
                                    a_points=None,
                                    q_min=None,
                                    q_max=None,
                                    q_points=None,
                                    r=None)
