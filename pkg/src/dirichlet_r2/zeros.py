"""Zeros of Dirichlet L-functions on the critical line and their statistics.

L(s, chi) is evaluated as ``k^{-s} sum_r chi(r) zeta(s, r/k)``, with the
Hurwitz heads of all residue classes merged into a single chi-weighted
Dirichlet sum and an Euler-Maclaurin tail per class. Zeros are located by sign
changes of the rotated real signal Z(t) and polished by a batched
Illinois (modified regula falsi) iteration.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import roots_legendre

from .arith import sieve_primes, von_mangoldt_array
from .characters import DirichletCharacter, get_character, root_number
from .correlation import DEFAULT_PRIME_CUTOFF, mean_density, unfolded_r2
from .specfun import MAX_IMAG, PoleError, _em_tail, em_head_length, loggamma

DEFAULT_TOLERANCE = 1e-9
ROTATION_RESIDUAL = 1e-8
AUDIT_SPAN = 100  # expected zeros per audited subinterval
AUDIT_THRESHOLD = 2.0
MIN_ZEROS_R2 = 1000
_BATCH = 256
_DIP_POINTS = 6
_DIP_DEPTH = 4


class NonPrimitiveError(ValueError):
    """The character is induced from a smaller modulus."""


class RotationResidualWarning(RuntimeWarning):
    """e^{i theta} L(1/2 + it) has a non-negligible imaginary part."""


class TruncationWarning(UserWarning):
    """Smoothing too narrow for the prime-power cutoff."""


def _require_primitive(chi: DirichletCharacter) -> None:
    if not chi.is_primitive:
        raise NonPrimitiveError(
            f"character {chi.label_str} mod {chi.modulus} is not primitive (conductor {chi.conductor})"
        )


def _head_terms(chi: DirichletCharacter, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, n_max + 1)
    c = chi(n)
    keep = c != 0
    return np.log(n[keep].astype(float)), c[keep]


def _l_batch(s: np.ndarray, chi: DirichletCharacter, units: np.ndarray, logn: np.ndarray,
             coef: np.ndarray) -> np.ndarray:
    k = chi.modulus
    N = em_head_length(s)
    m = np.searchsorted(logn, math.log(k * N) + 1e-12, side="right")
    out = np.exp(-np.outer(s, logn[:m])) @ coef[:m]
    lk = math.log(k)
    principal = chi.is_principal
    pole = np.zeros(s.size, dtype=np.complex128)
    at_one = s == 1
    for r in units:
        x = N + r / k
        cr = chi(int(r))
        out += cr * np.exp(-s * lk) * _em_tail(s, x, 0)
        lx = math.log(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            if principal:
                pole += cr * np.exp((1 - s) * lx) / (s - 1)
            else:
                # sum chi(r) = 0, so x^{1-s}/(s-1) may be replaced by (x^{1-s} - 1)/(s-1)
                pole += cr * np.where(at_one, -lx, np.expm1((1 - s) * lx) / (s - 1))
    return out + np.exp(-s * lk) * pole


def l_value(s, chi: DirichletCharacter):
    """L(s, chi) for primitive chi, vectorized over s.

    Raises:
        NonPrimitiveError: chi is not primitive.
        PoleError: s = 1 with the principal character mod 1.
    """
    _require_primitive(chi)
    s_arr = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    scalar = np.ndim(s) == 0
    if chi.is_principal and np.any(s_arr == 1):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(np.abs(s_arr.imag) > MAX_IMAG):
        warnings.warn(f"|Im s| > {MAX_IMAG:g}: outside the validated range", RuntimeWarning, stacklevel=2)
    flat = s_arr.ravel()
    order = np.argsort(np.abs(flat))
    logn, coef = _head_terms(chi, chi.modulus * em_head_length(flat))
    units = np.flatnonzero(chi(np.arange(1, chi.modulus + 1)) != 0) + 1
    out = np.empty(flat.size, dtype=np.complex128)
    for lo in range(0, flat.size, _BATCH):
        idx = order[lo : lo + _BATCH]
        out[idx] = _l_batch(flat[idx], chi, units, logn, coef)
    out = out.reshape(s_arr.shape)
    return complex(out[0]) if scalar else out


def theta(t, chi: DirichletCharacter):
    """Phase making e^{i theta(t)} L(1/2 + it, chi) real.

    ``(t/2) log(k/pi) + Im log Gamma((1/2 + a + it)/2) - arg(root number)/2``
    with a the parity of chi.
    """
    t = np.asarray(t, dtype=float)
    smooth = 0.5 * t * math.log(chi.modulus / math.pi) + np.imag(loggamma((0.5 + chi.parity + 1j * t) / 2))
    return smooth - 0.5 * np.angle(root_number(chi))


def smooth_count(T, chi_or_k) -> np.ndarray:
    """(T/2pi) log(kT/(2 pi e)), the integral of the mean density."""
    k = chi_or_k.modulus if isinstance(chi_or_k, DirichletCharacter) else int(chi_or_k)
    T = np.asarray(T, dtype=float)
    return T / (2 * math.pi) * np.log(k * T / (2 * math.pi * math.e))


def _theta_count(t, chi: DirichletCharacter):
    # smooth part of the zero-counting function via the rotation phase
    t = np.asarray(t, dtype=float)
    return (theta(t, chi) - theta(0.0, chi)) / math.pi


def rotated_signal(t, chi: DirichletCharacter, return_residual: bool = False):
    """Z(t) = Re[e^{i theta(t)} L(1/2 + it, chi)], real and continuous in t with
    the same zeros as L on the critical line.

    A ``RotationResidualWarning`` is issued when the discarded imaginary part
    exceeds 1e-8 relative to max(|L|, 1e-3).
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    L = l_value(0.5 + 1j * t_arr, chi)
    rot = np.exp(1j * theta(t_arr, chi)) * L
    resid = np.abs(rot.imag) / np.maximum(np.abs(L), 1e-3)
    if np.any(resid > ROTATION_RESIDUAL):
        warnings.warn(f"rotation residual up to {resid.max():.2e}; precision loss likely",
                      RotationResidualWarning, stacklevel=2)
    z = rot.real
    if np.ndim(t) == 0:
        z, resid = float(z[0]), float(resid[0])
    return (z, resid) if return_residual else z


def _signal(t: np.ndarray, chi: DirichletCharacter) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RotationResidualWarning)
        return np.atleast_1d(rotated_signal(t, chi))


@dataclass(frozen=True)
class AuditRecord:
    lo: float
    hi: float
    found: int
    expected: float
    step: float
    ok: bool


@dataclass
class ZeroList:
    character: DirichletCharacter
    t_min: float
    t_max: float
    zeros: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE
    scan_step: float = 0.0
    audit: list[AuditRecord] = field(default_factory=list)
    surrogate: str | None = None

    def __post_init__(self):
        self.zeros = np.asarray(self.zeros, dtype=float)
        if self.zeros.size > 1 and np.any(np.diff(self.zeros) <= 0):
            raise ValueError("zero heights must be strictly increasing")

    def __len__(self) -> int:
        return int(self.zeros.size)

    @property
    def audit_passed(self) -> bool:
        return all(a.ok for a in self.audit)

    def header(self) -> list[str]:
        chi = self.character
        lines = [
            f"k={chi.modulus}",
            f"label={chi.label_str}",
            f"parity={chi.parity}",
            f"t_min={float(self.t_min)!r}",
            f"t_max={float(self.t_max)!r}",
            f"tolerance={float(self.tolerance)!r}",
            f"scan_step={float(self.scan_step)!r}",
            f"count={len(self)}",
            f"audit_passed={self.audit_passed}",
        ]
        if self.surrogate:
            lines.append(f"surrogate={self.surrogate}")
        return lines

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for line in self.header():
                fh.write(f"# {line}\n")
            for z in self.zeros:
                fh.write(f"{z:.17g}\n")

    @classmethod
    def load(cls, path: str | Path) -> "ZeroList":
        meta: dict[str, str] = {}
        values = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    meta[key.strip()] = val.strip()
                else:
                    values.append(float(line))
        for key in ("k", "label", "t_min", "t_max"):
            if key not in meta:
                raise ValueError(f"zero file {path} lacks header field '{key}'")
        chi = get_character(int(meta["k"]), meta["label"])
        return cls(
            character=chi,
            t_min=float(meta["t_min"]),
            t_max=float(meta["t_max"]),
            zeros=np.array(values),
            tolerance=float(meta.get("tolerance", DEFAULT_TOLERANCE)),
            scan_step=float(meta.get("scan_step", 0.0)),
            surrogate=meta.get("surrogate"),
        )


def default_scan_step(chi: DirichletCharacter, t_max: float) -> float:
    """0.5 / dbar(t_max), with the density floored at its value for kt = 2 pi e."""
    d = math.log(max(chi.modulus * t_max / (2 * math.pi), math.e)) / (2 * math.pi)
    return 0.5 / d


def _find_brackets(t: np.ndarray, z: np.ndarray, chi: DirichletCharacter, depth: int = 0):
    """Sign-change brackets of the sampled signal, resolving same-sign dips of
    |Z| by local resampling (a dip may hide a close pair of zeros)."""
    exact = list(t[z == 0])
    sign = np.sign(z)
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    brackets = [(t[i], t[i + 1], z[i], z[i + 1]) for i in idx]
    if depth < _DIP_DEPTH and z.size >= 3:
        a = np.abs(z)
        mid = np.flatnonzero((sign[:-2] == sign[1:-1]) & (sign[1:-1] == sign[2:]) & (sign[1:-1] != 0)
                             & (a[1:-1] < a[:-2]) & (a[1:-1] < a[2:])) + 1
        if mid.size:
            sub = np.concatenate([np.linspace(t[i - 1], t[i + 1], _DIP_POINTS + 2)[1:-1] for i in mid])
            zs = _signal(sub, chi)
            for j, i in enumerate(mid):
                tt = np.concatenate([[t[i - 1]], sub[j * _DIP_POINTS : (j + 1) * _DIP_POINTS], [t[i + 1]]])
                zz = np.concatenate([[z[i - 1]], zs[j * _DIP_POINTS : (j + 1) * _DIP_POINTS], [z[i + 1]]])
                b, e = _find_brackets(tt, zz, chi, depth + 1)
                brackets.extend(b)
                exact.extend(e)
    return brackets, exact


def _polish(brackets, chi: DirichletCharacter, tol: float, max_iter: int = 200) -> np.ndarray:
    """Batched Illinois iteration; every bracket shrinks to width <= tol.

    Once the estimate stops moving, a probe half a tolerance beyond it on the
    far side closes the bracket instead of waiting for the stale endpoint.
    """
    if not brackets:
        return np.zeros(0)
    a, b, fa, fb = (np.array(col, dtype=float) for col in zip(*brackets))
    side = np.zeros(a.size, dtype=int)
    last = np.full(a.size, np.nan)
    active = (b - a) > tol
    for it in range(max_iter):
        if not active.any():
            break
        ia = np.flatnonzero(active)
        c = b[ia] - fb[ia] * (b[ia] - a[ia]) / (fb[ia] - fa[ia])
        settled = np.abs(c - last[ia]) < 0.25 * tol
        c = np.where(settled & (side[ia] == 1), a[ia] + 0.5 * tol, c)
        c = np.where(settled & (side[ia] == -1), b[ia] - 0.5 * tol, c)
        if it % 8 == 7:
            c = 0.5 * (a[ia] + b[ia])
        c = np.clip(c, a[ia], b[ia])
        last[ia] = c
        fc = _signal(c, chi)
        exact = fc == 0
        same_a = (np.sign(fc) == np.sign(fa[ia])) & ~exact
        other = ~same_a & ~exact
        # replace the endpoint with the same sign; halve the stale value (Illinois)
        ja, jb = ia[same_a], ia[other]
        a[ja], fa[ja] = c[same_a], fc[same_a]
        fb[ja[side[ja] == 1]] *= 0.5
        side[ja] = 1
        b[jb], fb[jb] = c[other], fc[other]
        fa[jb[side[jb] == -1]] *= 0.5
        side[jb] = -1
        je = ia[exact]
        a[je] = b[je] = c[exact]
        active = (b - a) > tol
    return 0.5 * (a + b)


def _scan_interval(chi: DirichletCharacter, lo: float, hi: float, step: float, tol: float) -> np.ndarray:
    n = max(2, math.ceil((hi - lo) / step) + 1)
    t = np.linspace(lo, hi, n)
    z = _signal(t, chi)
    brackets, exact = _find_brackets(t, z, chi)
    roots = np.concatenate([_polish(brackets, chi, tol), np.array(exact, dtype=float)])
    roots = np.unique(roots[(roots > lo) & (roots <= hi)])
    return roots


def _audited_interval(args) -> tuple[np.ndarray, AuditRecord]:
    chi, lo, hi, step, tol = args
    expected = float(_theta_count(hi, chi) - _theta_count(lo, chi))
    for _ in range(3):
        roots = _scan_interval(chi, lo, hi, step, tol)
        ok = abs(roots.size - expected) <= AUDIT_THRESHOLD
        if ok:
            break
        step *= 0.5
    return roots, AuditRecord(lo, hi, int(roots.size), expected, step, ok)


def find_zeros(chi: DirichletCharacter, t_min: float, t_max: float, scan_step: float | None = None,
               tolerance: float = DEFAULT_TOLERANCE, workers: int = 1) -> ZeroList:
    """All sign-change zeros of Z on (t_min, t_max].

    The window is cut into subintervals holding about 100 expected zeros.
    Each is scanned, dips are resampled, and roots are polished to
    ``tolerance``. The count is then compared with the smooth counting
    function. A subinterval whose count is off by more than 2 is rescanned
    at half the step, twice at most. Failures that persist are kept in
    ``ZeroList.audit``.

    Args:
        chi: primitive character.
        t_min, t_max: window, ``0 < t_min <= t_max <= 3e4``.
        scan_step: sampling step; default and maximum 0.5 / dbar(t_max).
        tolerance: final bracket width.
        workers: processes used for disjoint subintervals.
    """
    _require_primitive(chi)
    if t_min == t_max:
        return ZeroList(chi, t_min, t_max, np.zeros(0), tolerance, scan_step or 0.0)
    if not 0 <= t_min < t_max <= MAX_IMAG:
        raise ValueError(f"need 0 <= t_min < t_max <= {MAX_IMAG:g}")
    max_step = default_scan_step(chi, t_max)
    step = max_step if scan_step is None else float(scan_step)
    if step <= 0 or step > max_step * (1 + 1e-12):
        raise ValueError(f"scan_step must lie in (0, {max_step:.6g}]")
    # subinterval edges at equal increments of the smooth count
    n0, n1 = _theta_count(t_min, chi), _theta_count(t_max, chi)
    pieces = max(1, int(round((n1 - n0) / AUDIT_SPAN)))
    grid = np.linspace(t_min, t_max, 8 * pieces + 1)
    counts = _theta_count(grid, chi)
    edges = np.interp(np.linspace(n0, n1, pieces + 1), counts, grid)
    edges[0], edges[-1] = t_min, t_max
    tasks = [(chi, float(lo), float(hi), step, tolerance) for lo, hi in zip(edges[:-1], edges[1:])]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_audited_interval, tasks))
    else:
        results = [_audited_interval(task) for task in tasks]
    zeros = np.concatenate([r for r, _ in results]) if results else np.zeros(0)
    zeros = np.unique(zeros)
    # roots polished from both sides of a subinterval edge can differ by < tolerance
    if zeros.size > 1:
        zeros = zeros[np.concatenate([[True], np.diff(zeros) > 2 * tolerance])]
    return ZeroList(chi, t_min, t_max, zeros, tolerance, step, [rec for _, rec in results])


def poisson_surrogate(source: ZeroList, seed: int = 0) -> ZeroList:
    """Uncorrelated points with the same smooth density and count as ``source``:
    uniform in the unfolded coordinate, mapped back through the smooth count."""
    rng = np.random.default_rng(seed)
    chi = source.character
    lo = max(source.t_min, 2 * math.pi * math.e / chi.modulus)
    grid = np.linspace(lo, source.t_max, 20001)
    counts = smooth_count(grid, chi)
    u = np.sort(rng.uniform(counts[0], counts[-1], len(source)))
    pts = np.unique(np.interp(u, counts, grid))
    return ZeroList(chi, source.t_min, source.t_max, pts, source.tolerance, source.scan_step,
                    surrogate=f"poisson seed={seed}")


@dataclass
class EmpiricalR2:
    """Unfolded pair-gap histogram.

    ``windows`` holds (E_center, half_width, n_first) for each block of zeros
    unfolded with one density value; ``window`` is the overall span.
    """

    source: ZeroList
    bin_width: float
    window: tuple[float, float]
    x_bin: np.ndarray
    density: np.ndarray
    stderr: np.ndarray
    windows: list[tuple[float, float, int]] = field(default_factory=list)

    @property
    def edges(self) -> np.ndarray:
        return np.append(self.x_bin - 0.5 * self.bin_width, self.x_bin[-1] + 0.5 * self.bin_width)

    def csv_rows(self) -> list[str]:
        return [f"{x:.6g},{d:.10g},{s:.10g}" for x, d, s in zip(self.x_bin, self.density, self.stderr)]


def unfolding_windows(t_lo: float, t_hi: float, k: int, max_variation: float = 0.01) -> np.ndarray:
    """Edges of consecutive windows over which dbar changes by at most ``max_variation``."""
    edges = [t_lo]
    floor = 2 * math.pi * math.e / k
    while edges[-1] < t_hi:
        a = max(edges[-1], floor)
        # log(k b / 2pi) = (1 + v) log(k a / 2pi)
        b = 2 * math.pi / k * (k * a / (2 * math.pi)) ** (1 + max_variation)
        edges.append(min(b, t_hi))
    return np.array(edges)


def empirical_r2(zl: ZeroList, bin_width: float = 0.1, max_x: float = 3.0, max_variation: float = 0.01) -> EmpiricalR2:
    """Pair-gap histogram of unfolded forward gaps x = (E_j - E_i) dbar.

    Zeros are grouped into windows with nearly constant density. Each gap is
    unfolded with dbar at the centre of the window holding its first element.
    The first element is restricted to heights whose full gap range
    [0, max_x] lies inside the data (edge correction). density = count /
    (n_first * bin_width), so a Poisson process gives 1.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    if max_x <= 0:
        raise ValueError("max_x must be positive")
    if len(zl) < MIN_ZEROS_R2:
        raise ValueError(f"empirical_r2 needs at least {MIN_ZEROS_R2} zeros, got {len(zl)}")
    k = zl.character.modulus
    E = zl.zeros
    nbins = int(round(max_x / bin_width))
    edges_x = np.arange(nbins + 1) * bin_width
    counts = np.zeros(nbins)
    n_first = 0
    windows = []
    w_edges = unfolding_windows(E[0], E[-1], k, max_variation)
    for lo, hi in zip(w_edges[:-1], w_edges[1:]):
        center = 0.5 * (lo + hi)
        d = mean_density(center, k)
        first = np.flatnonzero((E >= lo) & (E < hi) & (E + max_x / d <= E[-1]))
        if first.size == 0:
            continue
        reach = np.searchsorted(E, E[first] + max_x / d, side="right")
        for i, stop in zip(first, reach):
            gaps = (E[i + 1 : stop] - E[i]) * d
            counts += np.histogram(gaps, bins=edges_x)[0]
        n_first += first.size
        windows.append((center, 0.5 * (hi - lo), int(first.size)))
    if n_first == 0:
        raise ValueError("no zero has its full gap range inside the data")
    density = counts / (n_first * bin_width)
    stderr = np.sqrt(counts) / (n_first * bin_width)
    x_bin = edges_x[:-1] + 0.5 * bin_width
    span = (0.5 * (E[0] + E[-1]), 0.5 * (E[-1] - E[0]))
    return EmpiricalR2(zl, bin_width, span, x_bin, density, stderr, windows)


def predicted_histogram(emp: EmpiricalR2, prime_cutoff: int = DEFAULT_PRIME_CUTOFF, nodes: int = 4) -> np.ndarray:
    """Bin averages of the unfolded closed-form R2, weighted over the windows of ``emp``."""
    k = emp.source.character.modulus
    g, w = roots_legendre(nodes)
    lo = emp.edges[:-1]
    x = (lo[:, None] + 0.5 * emp.bin_width * (g + 1)).ravel()
    total = np.zeros(lo.size)
    weight = 0
    for center, _, n in emp.windows:
        vals = unfolded_r2(x, center, k, prime_cutoff).reshape(lo.size, nodes)
        total += n * (vals @ w) / 2
        weight += n
    return total / weight


def compare_histograms(emp: EmpiricalR2, predicted: np.ndarray, mad_limit: float = 0.05,
                       first_bin_limit: float = 0.15) -> dict:
    """Per-bin deviations, chi-square and the acceptance flags."""
    delta = emp.density - predicted
    safe = np.where(emp.stderr > 0, emp.stderr, np.sqrt(np.maximum(predicted, 1e-12) / (
        max(sum(n for *_, n in emp.windows), 1) * emp.bin_width)))
    z = delta / safe
    mad = float(np.mean(np.abs(delta)))
    first = float(emp.density[0])
    return {
        "n_zeros": len(emp.source),
        "bins": int(delta.size),
        "mad": mad,
        "max_abs_delta": float(np.max(np.abs(delta))),
        "chi2": float(np.sum(z**2)),
        "dof": int(delta.size),
        "z_scores": [float(v) for v in z],
        "first_bin_density": first,
        "gue_consistent": bool(mad <= mad_limit and first <= first_bin_limit),
    }


@dataclass(frozen=True)
class DensityCheck:
    E_grid: np.ndarray
    empirical: np.ndarray
    smooth: np.ndarray
    predicted: np.ndarray
    deviation_l2: float
    fluctuation_l2: float

    @property
    def relative_deviation(self) -> float:
        return self.deviation_l2 / self.fluctuation_l2 if self.fluctuation_l2 > 0 else 0.0


def min_smoothing(n_cutoff: int, weight: float = 1e-2) -> float:
    """Smallest Gaussian width for which the damping factor at n_cutoff is below ``weight``."""
    if n_cutoff < 2:
        return 0.0
    return math.sqrt(2 * math.log(1 / weight)) / math.log(n_cutoff)


def oscillating_density(E, chi: DirichletCharacter, n_cutoff: int, smoothing: float) -> np.ndarray:
    """-(1/pi) sum_{n <= n_cutoff} Lambda(n) n^{-1/2} e^{-sigma^2 log^2 n / 2} Re[chi(n) n^{-iE}]."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    if n_cutoff < 2:
        return np.zeros(E.size)
    lam = von_mangoldt_array(n_cutoff, sieve_primes(n_cutoff))
    n = np.flatnonzero(lam)
    n = n[chi(n) != 0]
    ln = np.log(n.astype(float))
    w = lam[n] / np.sqrt(n) * np.exp(-0.5 * (smoothing * ln) ** 2) * chi(n)
    out = np.empty(E.size)
    for lo in range(0, E.size, 512):
        out[lo : lo + 512] = np.real(np.exp(-1j * np.outer(E[lo : lo + 512], ln)) @ w)
    return -out / math.pi


def explicit_density_check(zl: ZeroList, E_center: float, width: float, n_cutoff: int, smoothing: float,
                           points: int = 801) -> DensityCheck:
    """Gaussian-smoothed zero density against dbar + truncated prime-power sum.

    Compares over [E_center - width/2, E_center + width/2]; zeros must cover
    the window plus 8 smoothing widths on each side.
    """
    lo, hi = E_center - width / 2, E_center + width / 2
    margin = 8 * smoothing
    if zl.t_min > lo - margin or zl.t_max < hi + margin:
        raise ValueError(f"zeros must cover [{lo - margin:.6g}, {hi + margin:.6g}]")
    if smoothing <= 0:
        raise ValueError("smoothing must be positive")
    rec = min_smoothing(n_cutoff)
    if smoothing < rec:
        warnings.warn(f"smoothing {smoothing:g} is below {rec:.3g} recommended for n_cutoff={n_cutoff}; "
                      "prime-power truncation is not controlled", TruncationWarning, stacklevel=2)
    chi = zl.character
    grid = np.linspace(lo, hi, points)
    near = zl.zeros[(zl.zeros > lo - margin) & (zl.zeros < hi + margin)]
    emp = np.exp(-0.5 * ((grid[:, None] - near) / smoothing) ** 2).sum(axis=1) / (smoothing * math.sqrt(2 * math.pi))
    smooth = np.log(chi.modulus * grid / (2 * math.pi)) / (2 * math.pi)
    pred = smooth + oscillating_density(grid, chi, n_cutoff, smoothing)
    dev = float(np.sqrt(np.mean((emp - pred) ** 2)))
    fluct = float(np.sqrt(np.mean((emp - smooth) ** 2)))
    return DensityCheck(grid, emp, smooth, pred, dev, fluct)
