"""Static PNG figures for CLI exports (Agg backend, no display needed)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_report(report, path, title=None):
    """Real and imaginary parts of the estimates against ``n`` (log scale)."""
    n = np.asarray(report.n_values)
    est = np.asarray(report.estimates, dtype=complex)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.semilogx(n, est.real, "o-", ms=3, label="real part")
    if np.any(np.abs(est.imag) > 1e-12):
        ax.semilogx(n, est.imag, "s-", ms=3, label="imaginary part")
    if report.limit is not None:
        ax.axhline(complex(report.limit).real, color="k", lw=0.8, ls="--", label="limit")
    for c in report.clusters:
        ax.axhline(complex(c).real, color="r", lw=0.8, ls=":")
    ax.set_xlabel("n")
    ax.set_title(title or report.label or report.status)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_spectrum(table, path, title=None):
    """Stems of ``|a_k|^2`` and, where present, of the measured intensities."""
    k = np.array([r.k for r in table.rows])
    a2 = np.array([abs(r.a) ** 2 for r in table.rows])
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if k.size:
        ax.stem(k, a2, linefmt="C0-", markerfmt="C0o", basefmt=" ", label="|a_k|^2")
        inten = np.array([np.nan if r.intensity is None else r.intensity for r in table.rows])
        if np.any(np.isfinite(inten)):
            ax.plot(k, inten, "x", color="C3", label="intensity")
    ax.set_xlabel("k")
    ax.set_title(title or table.title)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_autocorrelation(gamma, path, title=None):
    z, eta = gamma.atoms()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if len(z):
        ax.stem(np.asarray(z).reshape(len(z), -1)[:, 0], np.real(eta), basefmt=" ")
    ax.set_xlabel("z")
    ax.set_ylabel("eta")
    ax.set_title(title or f"autocorrelation at n={gamma.n}")
    return _save(fig, path)


def plot_scan(record, path, title=None):
    """Defect density against ``t`` with the ``ε`` threshold."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(record["t"], record["defect"], ".-", ms=3)
    ax.axhline(record["eps"], color="r", lw=0.8, ls="--", label="eps")
    ax.set_xlabel("t")
    ax.set_ylabel("defect density")
    ax.set_title(title or "almost-period scan")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_comb(comb, path, title=None):
    """Atom positions with their (real) weights."""
    fig, ax = plt.subplots(figsize=(6, 2.5))
    if len(comb):
        ax.stem(comb.x, np.real(comb.weights), basefmt=" ")
    ax.set_xlabel("x")
    ax.set_title(title or f"{len(comb)} atoms")
    return _save(fig, path)
