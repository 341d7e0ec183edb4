import logging
import os
import traceback
from threading import Lock, Thread

__all__ = ['FIFOQueue', 'parallel_map', 'worker_count']

THREADS_ENV = 'QUADPROP_SCAN_THREADS'


class FIFOQueue:

    def __init__(self, items=()):
        self.queue = list(items)
        self.lock = Lock()

    def push(self, item):
        with self.lock:
            self.queue.append(item)

    def pop(self):
        with self.lock:
            if self.queue:
                return self.queue.pop(0)
            return None

    def __len__(self):
        with self.lock:
            return len(self.queue)


def worker_count(default=1):
    value = os.environ.get(THREADS_ENV)
    if not value:
        return default
    try:
        count = int(value)
    except ValueError:
        logging.warning(f"ignoring {THREADS_ENV}={value!r}: not an integer")
        return default
    return max(1, count)


def parallel_map(func, items, num_threads=1, on_done=None):
    """
    Apply ``func`` to every item and return the results in item order.

    Worker threads pull indices from a shared queue. An exception raised by ``func`` is
    returned in place of that item's result, so one failure never aborts the others.
    ``on_done`` is called (under a lock) after every finished item, e.g. to tick a progress bar.
    """
    items = list(items)
    results = [None] * len(items)
    tasks = FIFOQueue(range(len(items)))
    done_lock = Lock()

    def work():
        while True:
            index = tasks.pop()
            if index is None:
                return
            try:
                results[index] = func(items[index])
            except Exception as e:
                logging.debug('\n'.join(traceback.format_exc().split('\n')[:-1]))
                results[index] = e
            if on_done is not None:
                with done_lock:
                    on_done()

    num_threads = max(1, min(num_threads, len(items)))
    if num_threads == 1:
        work()
        return results
    threads = [Thread(target=work, daemon=True) for _ in range(num_threads)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    return results
