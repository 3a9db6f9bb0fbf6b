"""
Activate many primes over the same network.

Columns are independent, so they are farmed out to a pool of worker
processes.  A loader fills the input queue with (column, node index) jobs
followed by one stop message per worker; each worker returns
(column, activation vector) on the output queue and a stop message when it
shuts down.  Results are placed by column index, so the matrix does not
depend on which worker finished first.

Dependencies:
    - numpy

"""

from __future__ import annotations

import logging
import multiprocessing as mp
from multiprocessing import Queue, cpu_count
from typing import List, Optional, Sequence

import numpy as np

from freeassoc.activation.spreading import (ActivationException, ActivationMatrix, ActivationParams, propagate,
                                            transition_operator)
from freeassoc.networks.semantic_network import SemanticNetwork

# Special purpose queue messages
POISON_PILL_MSG = "__DONE__"
FAILED_MSG = "__FAILED__"


def default_workers() -> int:
    return max(1, cpu_count() - 1)


def worker(id: int, w, inverse: np.ndarray, p: ActivationParams, q_in: Queue, q_out: Queue):
    """
    Takes (column, start) jobs off the queue until it sees the poison pill,
    then echoes the pill on the output queue and exits.
    """
    logging.info(f"Worker {id} initialized")
    job = q_in.get()
    while job != POISON_PILL_MSG:
        column, start = job
        try:
            q_out.put((column, propagate(w, inverse, start, p)))
        except ActivationException as e:
            q_out.put((FAILED_MSG, str(e)))
        job = q_in.get()
    q_out.put((POISON_PILL_MSG, None))
    logging.info(f"Worker {id} shutting down")


def spread_batch(g: SemanticNetwork, primes: Sequence[str], p: ActivationParams,
                 threads: Optional[int] = None) -> ActivationMatrix:
    """
    Column j of the result equals spread(g, primes[j], p).

    Arguments:
        g:SemanticNetwork
            network to activate
        primes:Sequence[str]
            prime labels, duplicates allowed
        p:ActivationParams
            parameters; "auto" fields are resolved once for the batch
        threads:Optional[int]
            worker process cap; 1 runs inline
            Default: cpu_count() - 1

    Raises:
        ActivationException:
            if any prime is not in the network; checked before any work
    """
    missing = [prime for prime in primes if prime not in g]
    if missing:
        raise ActivationException(f"{len(missing)} primes not in network, e.g. {missing[0]!r}")

    p = p.resolve(g)
    w, inverse = transition_operator(g, p.weighted)
    starts: List[int] = [g.index_of(prime) for prime in primes]
    values = np.zeros((g.node_count, len(starts)), dtype=np.float64)

    workers = min(threads if threads is not None else default_workers(), len(starts))
    if workers <= 1:
        for column, start in enumerate(starts):
            values[:, column] = propagate(w, inverse, start, p)
        return ActivationMatrix(g.labels, primes, values)

    ctx = mp.get_context("spawn")
    q_in = ctx.Queue(0)
    q_out = ctx.Queue(0)
    for job in enumerate(starts):
        q_in.put(job)
    for _ in range(workers):
        q_in.put(POISON_PILL_MSG)

    processes = []
    for i in range(workers):
        proc = ctx.Process(target=worker, args=(i, w, inverse, p, q_in, q_out))
        proc.start()
        processes.append(proc)

    failures = []
    active_workers = workers
    while active_workers > 0:
        column, vector = q_out.get()
        if column == POISON_PILL_MSG:
            logging.info("Worker shutdown detected")
            active_workers -= 1
        elif column == FAILED_MSG:
            failures.append(vector)
        else:
            values[:, column] = vector

    for proc in processes:
        proc.join()
    q_in.close()
    q_out.close()
    if failures:
        raise ActivationException(f"{len(failures)} columns failed: {failures[0]}")
    return ActivationMatrix(g.labels, primes, values)
