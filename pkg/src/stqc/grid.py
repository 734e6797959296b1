"""Periodic spatial grid, wavefunction container, and the five primitive unitaries.

The box is [-L, L)^d sampled at N points per axis (N a power of two), with
dual wavenumbers k = (pi/L) * m, m in [-N/2, N/2), Nyquist on the negative
side.  All primitives return new states; values arrays are never mutated.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .errors import ChirpAliasing, SupportOverflow, WrapAroundRisk

_MAGIC = b"STQC"
_DUMP_VERSION = 1


class Grid:
    """Uniform periodic grid on [-L, L)^d, d in {1, 2}, N a power of two."""

    def __init__(self, dim: int, n_points: int, half_width: float):
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        if n_points < 8 or (n_points & (n_points - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 8, got {n_points}")
        if half_width <= 0:
            raise ValueError("half_width must be positive")
        self.dim = dim
        self.n_points = n_points
        self.half_width = float(half_width)
        self.spacing = 2.0 * self.half_width / n_points
        # one axis; both axes are identical in d=2
        self.axis = -self.half_width + self.spacing * np.arange(n_points)
        # angular wavenumbers in FFT (unshifted) order, Nyquist negative
        self.k_axis = 2.0 * np.pi * np.fft.fftfreq(n_points, d=self.spacing)
        if dim == 1:
            self.x = (self.axis,)
            self.r2 = self.axis**2
            self.k2 = self.k_axis**2
        else:
            xg, yg = np.meshgrid(self.axis, self.axis, indexing="ij")
            self.x = (xg, yg)
            self.r2 = xg**2 + yg**2
            kx, ky = np.meshgrid(self.k_axis, self.k_axis, indexing="ij")
            self.k2 = kx**2 + ky**2
        self._interior = np.abs(self.x[0]) <= self.half_width / 2
        for ax in self.x[1:]:
            self._interior = self._interior & (np.abs(ax) <= self.half_width / 2)

    @property
    def shape(self):
        return (self.n_points,) * self.dim

    @property
    def cell_volume(self):
        return self.spacing**self.dim

    @property
    def k_max(self):
        """Largest resolvable angular wavenumber, pi/spacing."""
        return np.pi / self.spacing

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.dim == other.dim
            and self.n_points == other.n_points
            and self.half_width == other.half_width
        )

    def __repr__(self):
        return f"Grid(dim={self.dim}, n_points={self.n_points}, half_width={self.half_width})"


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes on a Grid; discrete L2 norm sum(|psi|^2) * h^d."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.grid.shape}")
        object.__setattr__(self, "values", vals)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume))

    def inner(self, other: "WaveFunction") -> complex:
        """<self, other> with the physics convention (conjugate-linear first slot)."""
        return complex(np.vdot(self.values, other.values) * self.grid.cell_volume)

    def normalized(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.values / self.norm())

    def boundary_mass(self) -> float:
        """Fraction of the squared norm carried by points with |x|_inf > L/2."""
        total = np.sum(np.abs(self.values) ** 2)
        if total == 0.0:
            return 0.0
        outer = np.sum(np.abs(self.values[~self.grid._interior]) ** 2)
        return float(outer / total)

    def distance(self, other: "WaveFunction") -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.values - other.values) ** 2) * self.grid.cell_volume)
        )


def _as_vector(v, dim) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.size == 1 and dim > 1:
        arr = np.full(dim, arr[0])
    if arr.size != dim:
        raise ValueError(f"expected a length-{dim} vector, got {v!r}")
    return arr


def apply_quadratic_phase(psi: WaveFunction, a: float) -> WaveFunction:
    """Multiply by exp(i*a*|x|^2)."""
    if a == 0.0:
        return WaveFunction(psi.grid, psi.values.copy())
    return WaveFunction(psi.grid, psi.values * np.exp(1j * a * psi.grid.r2))


def apply_plane_wave_and_translation(
    psi: WaveFunction, p, q, theta: float = 0.0, *, wrap_threshold: float = 1e-8
) -> WaveFunction:
    """Apply exp(i*theta) exp(i<p,x>) tau_q, translation first.

    Translation uses the Fourier shift multiplier exp(-i<k,q>), exact for
    periodic band-limited data.  Raises WrapAroundRisk when psi carries more
    than `wrap_threshold` of its mass near the boundary and q != 0.
    """
    grid = psi.grid
    p = _as_vector(p, grid.dim)
    q = _as_vector(q, grid.dim)
    if np.max(np.abs(q)) >= grid.half_width:
        raise ValueError(f"|q|_inf = {np.max(np.abs(q)):.3g} must be < L = {grid.half_width}")
    vals = psi.values
    if np.any(q != 0.0):
        bm = psi.boundary_mass()
        if bm > wrap_threshold:
            raise WrapAroundRisk(
                f"boundary mass {bm:.3e} exceeds {wrap_threshold:.1e}; translation would wrap"
            )
        spec = np.fft.fftn(vals)
        for ax in range(grid.dim):
            shape = [1] * grid.dim
            shape[ax] = grid.n_points
            spec = spec * np.exp(-1j * grid.k_axis * q[ax]).reshape(shape)
        vals = np.fft.ifftn(spec)
    phase = theta + sum(p[ax] * grid.x[ax] for ax in range(grid.dim))
    return WaveFunction(grid, vals * np.exp(1j * phase))


def reflect(psi: WaveFunction) -> WaveFunction:
    """Parity flip psi(x) -> psi(-x); exact on the symmetric grid."""
    vals = psi.values
    for ax in range(psi.grid.dim):
        vals = np.roll(np.flip(vals, axis=ax), 1, axis=ax)
    return WaveFunction(psi.grid, vals)


def _czt_rescale(vals: np.ndarray, alpha: float, axis: int) -> np.ndarray:
    """Evaluate the trigonometric interpolant of vals at alpha * x_j along one axis."""
    n = vals.shape[axis]
    # Fourier coefficients c_m with m in [-N/2, N/2): psi_j = sum_m c_m e^{i k_m x_j}
    idx = np.arange(n)
    sign = np.where(idx % 2 == 0, 1.0, -1.0)  # (-1)^m in FFT index order (N even)
    shape = [1] * vals.ndim
    shape[axis] = n
    c = np.fft.fft(vals, axis=axis) * (sign / n).reshape(shape)
    # d_m = c_m e^{-i pi m alpha}; shift m -> n-index and chirp-transform
    m = np.fft.fftfreq(n, d=1.0 / n)  # integer m in FFT order
    d = c * np.exp(-1j * np.pi * m * alpha).reshape(shape)
    d = np.fft.fftshift(d, axes=axis)
    w = np.exp(2j * np.pi * alpha / n)
    out = czt(d, m=n, w=w, a=1.0 + 0.0j, axis=axis)
    out = out * np.exp(-1j * np.pi * alpha * idx).reshape(shape)
    return out


def apply_dilation(psi: WaveFunction, alpha: float, *, support_threshold: float = 1e-8) -> WaveFunction:
    """(D_alpha psi)(x) = alpha^{d/2} psi(alpha x) by band-limited resampling.

    Requires alpha > 0 (negative dilations are reflection o D_{|alpha|}; see
    factor_algebra).  Raises SupportOverflow when input or output carries more
    than `support_threshold` boundary mass.
    """
    if alpha <= 0:
        raise ValueError("apply_dilation requires alpha > 0")
    grid = psi.grid
    if alpha == 1.0:
        return WaveFunction(grid, psi.values.copy())
    bm = psi.boundary_mass()
    if bm > support_threshold:
        raise SupportOverflow(
            f"input boundary mass {bm:.3e} exceeds {support_threshold:.1e}"
        )
    vals = psi.values
    for ax in range(grid.dim):
        vals = _czt_rescale(vals, alpha, ax)
    out = WaveFunction(grid, vals * alpha ** (grid.dim / 2.0))
    bm_out = out.boundary_mass()
    if bm_out > support_threshold:
        raise SupportOverflow(
            f"output boundary mass {bm_out:.3e} exceeds {support_threshold:.1e}; "
            f"box too small for alpha = {alpha}"
        )
    return out


def apply_free_propagator(psi: WaveFunction, s: float) -> WaveFunction:
    """exp(i*s*Delta): Fourier multiplier exp(-i*s*|k|^2)."""
    if s == 0.0:
        return WaveFunction(psi.grid, psi.values.copy())
    spec = np.fft.fftn(psi.values)
    spec *= np.exp(-1j * s * psi.grid.k2)
    return WaveFunction(psi.grid, np.fft.ifftn(spec))


def _czt_paper_fourier(vals: np.ndarray, s: float, grid: Grid, axis: int) -> np.ndarray:
    """One axis of h * sum_j' f(x_j') e^{-i x_j' xi_j} evaluated at xi_j = x_j / (2s)."""
    n = grid.n_points
    h = grid.spacing
    bigl = grid.half_width
    j = np.arange(n)
    shape = [1] * vals.ndim
    shape[axis] = n
    # x_{j'} xi_j = [L^2 - L h (j + j') + h^2 j j'] / (2s)
    pre = np.exp(1j * bigl * h * j / (2.0 * s)).reshape(shape)
    w = np.exp(-1j * h * h / (2.0 * s))
    out = czt(vals * pre, m=n, w=w, a=1.0 + 0.0j, axis=axis)
    out = out * pre * np.exp(-1j * bigl * bigl / (2.0 * s)) * h
    return out


def apply_exp_isDelta_kernel(psi: WaveFunction, s: float) -> WaveFunction:
    """exp(i*s*Delta) via the chirp/Fourier/dilation kernel factorization.

    Applies (2*pi)^{-d/2} e^{-i sgn(s) pi d/4} e^{i|x|^2/4s} D_{1/2s} F e^{i|x|^2/4s}
    with the non-unitary transform F(f)(xi) = integral f(x) e^{-i x.xi} dx;
    agrees with apply_free_propagator on band-limited localized states.
    """
    if s == 0.0:
        raise ValueError("kernel factorization requires s != 0")
    grid = psi.grid
    if grid.half_width / (2.0 * abs(s)) > grid.k_max:
        raise ChirpAliasing(
            f"|x|_max/(2|s|) = {grid.half_width / (2 * abs(s)):.3g} exceeds the Nyquist "
            f"wavenumber {grid.k_max:.3g}; s too small for this grid"
        )
    chirp = np.exp(1j * grid.r2 / (4.0 * s))
    vals = psi.values * chirp
    for ax in range(grid.dim):
        vals = _czt_paper_fourier(vals, s, grid, ax)
    vals *= abs(2.0 * s) ** (-grid.dim / 2.0)  # dilation amplitude |1/2s|^{d/2}
    const = (2.0 * np.pi) ** (-grid.dim / 2.0) * np.exp(-1j * np.sign(s) * np.pi * grid.dim / 4.0)
    return WaveFunction(grid, const * vals * chirp)


def save_wavefunction(psi: WaveFunction, path) -> None:
    """Binary dump: little-endian {magic, version u32, d u32, N u32, L f64} + (re,im) f64 pairs."""
    header = struct.pack(
        "<4sIIId", _MAGIC, _DUMP_VERSION, psi.grid.dim, psi.grid.n_points, psi.grid.half_width
    )
    flat = np.ravel(psi.values, order="C")
    inter = np.empty(2 * flat.size, dtype="<f8")
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(header)
        inter.tofile(fh)


def load_wavefunction(path) -> WaveFunction:
    header_size = struct.calcsize("<4sIIId")
    with open(path, "rb") as fh:
        magic, version, dim, n_points, half_width = struct.unpack("<4sIIId", fh.read(header_size))
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}; not a state dump")
        if version != _DUMP_VERSION:
            raise ValueError(f"unsupported dump version {version}")
        inter = np.fromfile(fh, dtype="<f8")
    grid = Grid(dim, n_points, half_width)
    if inter.size != 2 * n_points**dim:
        raise ValueError("truncated state dump")
    vals = (inter[0::2] + 1j * inter[1::2]).reshape(grid.shape)
    return WaveFunction(grid, vals)
