"""Limit detection for sequences of finite-window estimates."""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .summation import pairwise_mean

TAIL = 5
TOL = 1e-3

CONVERGED = "converged"
OSCILLATING = "oscillating"
UNDETERMINED = "undetermined"

HEURISTIC_NOTE = ("limit detection is a heuristic on the last q estimates; "
                  "it does not certify the existence of a limit")


def _pairwise_spread(values):
    v = np.asarray(values, dtype=complex)
    if v.size < 2:
        return 0.0
    return float(np.max(np.abs(v[:, None] - v[None, :])))


def _single_link_clusters(values, tol):
    """Connected components of the graph joining estimates closer than ``tol``."""
    v = np.asarray(values, dtype=complex)
    n = v.size
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(v[i] - v[j]) < tol:
                label[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    # order clusters by first appearance so reports are deterministic
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass
class ConvergenceReport:
    """Finite-``n`` estimates with a verdict on their limiting behaviour.

    ``status`` is ``converged`` when the last ``q`` estimates are within ``tol``
    of each other (``limit`` is then the last estimate), ``oscillating`` when
    they split into at least two tight clusters of two or more estimates each,
    at least ``10 tol`` apart (``clusters`` holds the cluster means), and
    ``undetermined`` otherwise.
    """

    n_values: list
    estimates: list
    status: str
    limit: complex = None
    clusters: list = field(default_factory=list)
    tail_spread: float = 0.0
    q: int = TAIL
    tol: float = TOL
    label: str = ""

    @property
    def last(self):
        return self.estimates[-1]

    @property
    def limsup(self):
        """Upper limit of a real nonnegative sequence: the limit or the largest cluster."""
        if self.status == CONVERGED:
            return float(np.real(self.limit))
        if self.status == OSCILLATING:
            return float(max(np.real(c) for c in self.clusters))
        return float(np.max(np.real(self.estimates[-self.q:])))

    @property
    def value(self):
        """Best single number: the limit if converged, else the last estimate."""
        return self.limit if self.status == CONVERGED else self.last

    def summary(self):
        def enc(z):
            z = complex(z)
            return [z.real, z.imag]
        return {
            "label": self.label,
            "status": self.status,
            "limit": None if self.limit is None else enc(self.limit),
            "clusters": [enc(c) for c in self.clusters],
            "tail_spread": self.tail_spread,
            "q": self.q,
            "tol": self.tol,
            "note": HEURISTIC_NOTE,
        }

    def to_json(self):
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "re", "im"])
        for n, e in zip(self.n_values, self.estimates):
            e = complex(e)
            writer.writerow([n, repr(e.real), repr(e.imag)])
        return buf.getvalue()

    def __str__(self):
        if self.status == CONVERGED:
            detail = f"limit {complex(self.limit):.6g}"
        elif self.status == OSCILLATING:
            detail = "clusters " + ", ".join(f"{complex(c):.6g}" for c in self.clusters)
        else:
            detail = f"tail spread {self.tail_spread:.3g}"
        name = f"{self.label}: " if self.label else ""
        return f"{name}{self.status} ({detail}; n_max={self.n_values[-1]})"


def detect(n_values, estimates, q=TAIL, tol=TOL, label=""):
    """Classify the tail of ``estimates`` and build a :class:`ConvergenceReport`."""
    if len(n_values) != len(estimates):
        raise ValueError("one estimate per n is required")
    if len(estimates) == 0:
        raise ValueError("no estimates")
    if not tol > 0:
        raise ValueError("tol must be positive")
    est = [complex(e) for e in estimates]
    tail = est[-q:]
    spread = _pairwise_spread(tail)
    report = ConvergenceReport(list(n_values), est, UNDETERMINED, None, [], spread,
                               q, tol, label)
    if len(tail) < min(q, 2):
        return report
    if spread < tol:
        report.status = CONVERGED
        report.limit = est[-1]
        return report
    groups = _single_link_clusters(tail, tol)
    if len(groups) < 2:
        return report
    members = [np.asarray([tail[i] for i in g]) for g in groups]
    # a value seen once is not a recurrence; drifting tails stay undetermined
    if any(m.size < 2 or _pairwise_spread(m) >= tol for m in members):
        return report
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            gap = np.min(np.abs(members[a][:, None] - members[b][None, :]))
            if gap < 10 * tol:
                return report
    report.status = OSCILLATING
    report.clusters = [complex(pairwise_mean(m)) for m in members]
    return report
