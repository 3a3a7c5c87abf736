"""Special functions: hyperbolic gamma, B-kernel, Fourier kernels, elliptic gamma,
theta, classical beta, and the Lobachevsky volume function.

For real coupling the hyperbolic gamma is evaluated exclusively through the
quantum dilogarithm via

    gamma2(-i nabla (x + c_b); omega1, omega2) = e^{i pi x^2 / 2} / (sqrt(zeta_inv) Phi_b(x)),

inverted as x = i u / nabla - c_b (the |q| = 1 divergence kills the product
form there).  The product form is kept for genuinely complex period ratios
and for cross validation.  sqrt(zeta_inv) is the principal branch; it is
pinned against the direct contour integral by the test suite.
"""
from __future__ import annotations

import numpy as np
from scipy.special import loggamma, zeta as riemann_zeta

from .errors import NonConvergence, PoleHit
from .params import EllipticBases, ModularParameter
from .qdilog import get_engine
from .quadrature import IntegralResult, QuadratureConfig, integrate_1d

__all__ = [
    "hyperbolic_gamma", "hyperbolic_gamma_product", "bernoulli_b22", "hyper_B",
    "cap_psi", "psi_fn", "cap_psi_direct", "elliptic_gamma", "theta_fn",
    "classical_beta", "lobachevsky", "phi_b_asymptotic_tail",
]

_PI = np.pi


def bernoulli_b22(u, omega1=None, omega2=None, mp: ModularParameter | None = None):
    """Second-order double Bernoulli polynomial B_{2,2}(u; omega1, omega2)."""
    if mp is not None:
        omega1, omega2 = mp.omega1, mp.omega2
    u = np.asarray(u, dtype=complex)
    return (u**2 / (omega1 * omega2) - u / omega1 - u / omega2
            + omega1 / (6.0 * omega2) + omega2 / (6.0 * omega1) + 0.5)


def hyperbolic_gamma(u, mp: ModularParameter, tol: float = 1e-13):
    """gamma2(u; b, 1/b) for positive real coupling, scalar or array u."""
    u = np.asarray(u, dtype=complex)
    x = 1j * u - mp.cb
    eng = get_engine(mp.b, tol)
    sqrt_zeta = np.sqrt(mp.zeta_inv)  # principal branch
    return np.exp(0.5j * _PI * x**2) / (sqrt_zeta * eng(x))


def hyperbolic_gamma_general(u, omega1, omega2, tol: float = 1e-13):
    """gamma2(u; omega1, omega2) for arbitrary periods.

    Positive real ratios rescale (degree-zero homogeneity) onto the
    quantum-dilogarithm route; ratios with positive imaginary part use the
    double q-product.
    """
    ratio = complex(omega1) / complex(omega2)
    if abs(ratio.imag) < 1e-14 and ratio.real > 0:
        scale = np.sqrt(complex(omega1) * complex(omega2))
        mp = ModularParameter(float(np.sqrt(ratio.real)))
        return hyperbolic_gamma(np.asarray(u, dtype=complex) / scale, mp, tol)
    return hyperbolic_gamma_product(u, complex(omega1), complex(omega2), tol)


def hyperbolic_gamma_product(u, omega1: complex, omega2: complex, tol: float = 1e-14,
                             max_terms: int = 40000):
    """gamma2 via the double q-product; needs Im(omega1/omega2) > 0.

    Used only for non-real period ratios and in cross-validation tests.
    """
    ratio = omega1 / omega2
    if ratio.imag <= 0:
        raise NonConvergence("product form requires Im(omega1/omega2) > 0; "
                             "use the Phi_b route for real ratios")
    q = np.exp(2j * _PI * omega1 / omega2)
    qt = np.exp(-2j * _PI * omega2 / omega1)
    if abs(q) >= 1.0 or abs(qt) >= 1.0:
        raise NonConvergence("|q| or |q~| >= 1")
    u = np.asarray(u, dtype=complex)

    def pochhammer(a, base):
        n = int(np.ceil(np.log(tol * (1 - abs(base))) / np.log(abs(base)))) + 2
        if n > max_terms:
            raise NonConvergence(f"q-product needs {n} terms (> {max_terms})")
        ks = np.arange(n)
        terms = 1.0 - np.multiply.outer(a, base**ks)
        if (np.abs(terms) < 1e-300).any():
            raise PoleHit("q-product hit a vanishing factor")
        return np.exp(np.sum(np.log(terms), axis=-1))

    num = pochhammer(np.exp(2j * _PI * u / omega1) * qt, qt)
    den = pochhammer(np.exp(2j * _PI * u / omega2), q)
    return np.exp(-0.5j * _PI * bernoulli_b22(u, omega1, omega2)) * num / den


def hyper_B(x, y, mp: ModularParameter, tol: float = 1e-13):
    """B(x, y) = gamma2(x) gamma2(y) / gamma2(x + y)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return (hyperbolic_gamma(x, mp, tol) * hyperbolic_gamma(y, mp, tol)
            / hyperbolic_gamma(x + y, mp, tol))


def gamma2_line(c: complex, mp: ModularParameter, tol: float = 1e-13, radius: float = 8.0):
    """Fast evaluator of w -> gamma2(c + i w) for real w (fixed complex offset c).

    The underlying dilogarithm argument runs along a horizontal line, which a
    spline cache evaluates at interpolation speed; used by the identity
    integrands that revisit the same line thousands of times.
    """
    from .qdilog import LineCache
    eng = get_engine(mp.b, tol)
    c = complex(c)
    y_line = c.real - abs(mp.cb)         # Im of the Phi_b argument
    x_off = -c.imag                      # Re offset of the Phi_b argument
    cache = LineCache(eng, y_line, radius + abs(x_off))
    sqrt_zeta = np.sqrt(mp.zeta_inv)

    def ev(w):
        w = np.asarray(w, dtype=float)
        xr = x_off - w
        z = xr + 1j * y_line
        return np.exp(0.5j * _PI * z**2) / (sqrt_zeta * cache(xr))

    return ev


def cap_psi(u, v, w, mp: ModularParameter, tol: float = 1e-13):
    """Closed form of the Fourier kernel int_R Phi_b(u+x)/Phi_b(v+x) e^{2 pi i w x} dx."""
    eng = get_engine(mp.b, tol)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    val = (mp.zeta_o * eng(u - v - mp.cb) * eng(w + mp.cb) / eng(u - v + w - mp.cb)
           * np.exp(-2j * _PI * w * (v + mp.cb)))
    return val


def psi_fn(x, y, mp: ModularParameter, tol: float = 1e-13):
    """psi(x, y) = cap_psi(x, -x, y)."""
    x = np.asarray(x, dtype=complex)
    return cap_psi(x, -x, y, mp, tol)


def phi_b_asymptotic_tail(w, a_cut):
    """Regularized left tail int_{-inf}^{-A} e^{2 pi i w x} dx = e^{-2 pi i w A}/(2 pi i w)."""
    return np.exp(-2j * _PI * w * a_cut) / (2j * _PI * w)


def cap_psi_direct(u, v, w, mp: ModularParameter, cfg: QuadratureConfig) -> IntegralResult:
    """Direct quadrature of the defining Fourier integral (oracle for cap_psi).

    Needs Im(u - v) > 0 so the ratio decays on the right; on the left the
    ratio tends to 1 and the pure-oscillation tail is summed in closed
    (Abel-regularized) form.  w must have nonzero real part if real.
    """
    u, v, w = complex(u), complex(v), complex(w)
    if (u - v).imag <= 0:
        raise NonConvergence("direct kernel integral needs Im(u - v) > 0")
    if w == 0:
        raise NonConvergence("w = 0 has no regularized tail")
    eng = get_engine(mp.b, cfg.phib_tol)
    step = min(mp.b, 1.0 / mp.b)
    # left cut where |Phi(u+x)/Phi(v+x) - 1| < tol; right cut from the decay rate
    a_cut = (np.log(1.0 / cfg.abs_tol) + 4.0) / (2 * _PI * step) + max(abs(u), abs(v))
    b_cut = (np.log(1.0 / cfg.abs_tol) + 4.0) / (2 * _PI * (u - v).imag) + max(abs(u), abs(v))

    def f(t):
        return eng(u + t) / eng(v + t) * np.exp(2j * _PI * w * t)

    core = integrate_1d(f, cfg, interval=(-a_cut, b_cut))
    tail = phi_b_asymptotic_tail(w, a_cut)
    return IntegralResult(core.value + tail, core.error_estimate, core.evaluations, "adaptive")


def _log1p_sum(z):
    return np.sum(np.log1p(z), axis=-1)


def elliptic_gamma(z, bases: EllipticBases, tol: float = 1e-14):
    """Elliptic gamma: prod_{i,j>=0} (1 - p^{i+1} q^{j+1}/z) / (1 - z p^i q^j)."""
    p, q = complex(bases.p), complex(bases.q)
    if abs(p) >= 1.0 or abs(q) >= 1.0:
        raise NonConvergence("elliptic gamma needs |p|, |q| < 1")
    z = np.asarray(z, dtype=complex)
    m = max(abs(p), abs(q))
    zmax = max(float(np.abs(z).max()), float(np.abs(1.0 / z).max()) * abs(p * q), 1.0)
    # tail bound: sum_{i+j>N} zmax m^{i+j} <= zmax (N+2) m^{N+1} / (1-m)^2
    n = 2
    while zmax * (n + 2) * m ** (n + 1) / (1 - m) ** 2 > tol:
        n += 1
        if n > 4000:
            raise NonConvergence("elliptic product truncation did not close")
    ii, jj = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = (ii + jj) <= n
    pq_num = (p ** (ii[keep] + 1)) * (q ** (jj[keep] + 1))
    pq_den = (p ** ii[keep]) * (q ** jj[keep])
    num_args = -np.multiply.outer(1.0 / z, pq_num)
    den_args = -np.multiply.outer(z, pq_den)
    if (np.abs(1.0 + den_args) < 1e-12).any():
        raise PoleHit("z within tolerance of an elliptic gamma pole p^{-i} q^{-j}")
    return np.exp(_log1p_sum(num_args) - _log1p_sum(den_args))


def theta_fn(z, p: complex, tol: float = 1e-14):
    """theta(z; p) = (z; p)_inf (p/z; p)_inf."""
    p = complex(p)
    if abs(p) >= 1.0:
        raise NonConvergence("theta needs |p| < 1")
    z = np.asarray(z, dtype=complex)
    n = max(int(np.ceil(np.log(tol * (1 - abs(p))) / np.log(abs(p)))) + 2, 4)
    ks = p ** np.arange(n)
    return np.exp(_log1p_sum(-np.multiply.outer(z, ks)) +
                  _log1p_sum(-np.multiply.outer(p / z, ks)))


def classical_beta(x, y):
    """Euler beta via complex log-gamma."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return np.exp(loggamma(x) + loggamma(y) - loggamma(x + y))


_CL2_KMAX = 40
_CL2_ZETAS = riemann_zeta(2 * np.arange(1, _CL2_KMAX + 1))


def lobachevsky(theta, tol: float = 1e-15):
    """Lobachevsky function L(theta) = (1/2) sum_{n>=1} sin(2 n theta)/n^2.

    Evaluated as Cl2(2 theta)/2 through the zeta-accelerated expansion
    Cl2(t) = t - t log|t| + sum_k zeta(2k) t^{2k+1} / (k (2k+1) (2 pi)^{2k}),
    absolutely convergent for |t| <= pi with ratio <= 1/4; truncation stops
    once the geometric tail bound drops below tol.
    """
    theta = np.asarray(theta, dtype=float)
    t = np.mod(2.0 * theta + _PI, 2.0 * _PI) - _PI  # fold 2*theta into [-pi, pi)
    out = np.where(t == 0.0, 0.0, t - t * np.log(np.maximum(np.abs(t), 1e-300)))
    r = (t / (2.0 * _PI)) ** 2
    term = t.copy().astype(float)
    acc = np.zeros_like(out)
    for k in range(1, _CL2_KMAX + 1):
        term = term * r
        contrib = _CL2_ZETAS[k - 1] * term / (k * (2 * k + 1))
        acc = acc + contrib
        if float(np.max(np.abs(contrib))) < tol * 0.1:
            break
    return 0.5 * (out + acc)
