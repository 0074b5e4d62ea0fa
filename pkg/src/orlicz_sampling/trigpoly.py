"""Trigonometric polynomials on the torus and the Marcinkiewicz node grid."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegreeError, ParameterError


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """``f(x) = sum_{k=-n}^{n} a_k exp(i k x)``.

    ``coeffs[k + n]`` holds ``a_k``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size % 2 != 1:
            raise DegreeError("coefficient array must have odd length 2n+1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return (self.coeffs.size - 1) // 2

    @property
    def n(self):
        return self.degree

    @property
    def frequencies(self):
        n = self.degree
        return np.arange(-n, n + 1)

    def coeff(self, k):
        n = self.degree
        return self.coeffs[k + n] if -n <= k <= n else 0j

    @property
    def mean(self):
        return self.coeffs[self.degree]

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        m = max(self.degree, other.degree)
        return TrigPoly(embed(self, m).coeffs + embed(other, m).coeffs)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c):
        return TrigPoly(complex(c) * self.coeffs)

    def __mul__(self, c):
        return TrigPoly(complex(c) * self.coeffs)

    def __neg__(self):
        return TrigPoly(-self.coeffs)

    def allclose(self, other, atol=1e-12):
        m = max(self.degree, other.degree)
        return np.allclose(embed(self, m).coeffs, embed(other, m).coeffs, rtol=0, atol=atol)

    def __repr__(self):
        return f"TrigPoly(degree={self.degree})"


def constant(c, n=0):
    a = np.zeros(2 * n + 1, complex)
    a[n] = c
    return TrigPoly(a)


def monomial(k, c=1.0):
    """``c * exp(i k x)`` as a polynomial of degree ``|k|``."""
    n = abs(k)
    a = np.zeros(2 * n + 1, complex)
    a[k + n] = c
    return TrigPoly(a)


def embed(f, m):
    """Same function, represented with degree ``m >= degree(f)``."""
    n = f.degree
    if m < n:
        raise DegreeError(f"cannot embed degree {n} into degree {m}")
    if m == n:
        return f
    a = np.zeros(2 * m + 1, complex)
    a[m - n:m + n + 1] = f.coeffs
    return TrigPoly(a)


# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NodeSet:
    """``x_{n,k} = 2 pi (n + k) / (2n + 1)``, ``k = -n..n``, equal weights."""

    n: int

    @property
    def k(self):
        return np.arange(-self.n, self.n + 1)

    @property
    def x(self):
        return 2 * np.pi * (self.n + self.k) / (2 * self.n + 1)

    @property
    def weights(self):
        return np.full(2 * self.n + 1, 1.0 / (2 * self.n + 1))


def nodes(n):
    if n < 0:
        raise ParameterError("n must be non-negative")
    return NodeSet(int(n))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(f, x):
    """Direct summation of the coefficient series at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    k = f.frequencies
    out = np.exp(1j * np.multiply.outer(x, k)) @ f.coeffs
    return out if out.ndim else complex(out)


def sample_uniform(f, N):
    """Values at ``x_j = 2 pi j / N``, ``j = 0..N-1``, via one inverse FFT.

    Frequencies are folded modulo ``N``, so any ``N >= 1`` is exact.
    """
    buf = np.zeros(N, complex)
    np.add.at(buf, f.frequencies % N, f.coeffs)
    return N * np.fft.ifft(buf)


def sample_nodes(f, n=None):
    """Values at the ``2n+1`` nodes ``x_{n,k}`` in ``k``-ascending order.

    ``n`` defaults to the degree of ``f``; it must not be smaller.
    """
    n = f.degree if n is None else int(n)
    if n < f.degree:
        raise DegreeError(f"degree {f.degree} polynomial sampled on the n={n} grid")
    # x_{n,k} = 2 pi j / (2n+1) with j = n + k: the uniform grid in order
    return sample_uniform(f, 2 * n + 1)


# ---------------------------------------------------------------------------
# special polynomials
# ---------------------------------------------------------------------------

def dirichlet(n):
    """``D_n = sum_{|k|<=n} exp(i k x)``."""
    return TrigPoly(np.ones(2 * n + 1, complex))


def dirichlet_closed_form(n, x):
    """``sin((2n+1)x/2) / sin(x/2)`` with the limit ``2n+1`` at multiples of 2 pi."""
    x = np.asarray(x, dtype=float)
    s = np.sin(x / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin((2 * n + 1) * x / 2) / s
    # D_n(2 pi m) = 2n+1 for every integer m
    val = np.where(np.abs(s) < 1e-12, 2 * n + 1.0, val)
    return val if val.ndim else float(val)


def spike_poly(n, S):
    """Degree-``n`` polynomial equal to 1 at nodes ``k in S`` and 0 elsewhere.

    Built as ``sum_{j in S} D_n(x - x_{n,j}) / (2n+1)``.
    """
    S = sorted(set(int(j) for j in S))
    if not S:
        raise ParameterError("spike set must be nonempty")
    if S[0] < -n or S[-1] > n:
        raise ParameterError(f"spike indices must lie in [-{n}, {n}]")
    m = np.arange(-n, n + 1)
    xj = 2 * np.pi * (n + np.asarray(S)) / (2 * n + 1)
    a = np.exp(-1j * np.multiply.outer(m, xj)).sum(axis=1) / (2 * n + 1)
    return TrigPoly(a)


def modulate(f, m):
    """``exp(i m x) f(x)``; the result has degree ``degree(f) + |m|``."""
    n = f.degree
    d = n + abs(m)
    a = np.zeros(2 * d + 1, complex)
    a[d - n + m:d + n + m + 1] = f.coeffs
    return TrigPoly(a)


def trim(f):
    """Drop vanishing outer coefficients (exact zeros only)."""
    c = f.coeffs
    n = f.degree
    while n > 0 and c[0] == 0 and c[-1] == 0:
        c = c[1:-1]
        n -= 1
    return TrigPoly(c)


# ---------------------------------------------------------------------------
# Hilbert transform and projections
# ---------------------------------------------------------------------------

def hilbert_transform(f):
    """Multiplier ``-i sgn(k)`` (with ``sgn(0) = 0``)."""
    return TrigPoly(-1j * np.sign(f.frequencies) * f.coeffs)


def riesz_plus(f):
    """Projection onto strictly positive frequencies, ``(I + iH - E)/2``.

    ``E`` takes the mean.  ``(I + iH)/2`` alone keeps half of the constant
    term because ``sgn(0) = 0``.
    """
    return 0.5 * (f + 1j * hilbert_transform(f) - constant(f.mean, f.degree))


def riesz_minus(f):
    """Projection onto strictly negative frequencies, ``(I - iH - E)/2``."""
    return 0.5 * (f - 1j * hilbert_transform(f) - constant(f.mean, f.degree))


def project(f, n):
    """Partial sum: keep coefficients with ``|k| <= n``.

    For ``n >= degree(f)`` this is the identity.
    """
    if n < 0:
        raise DegreeError("projection degree must be non-negative")
    d = f.degree
    if n >= d:
        return f
    return TrigPoly(f.coeffs[d - n:d + n + 1])


def project_composition(f, n, literal=False):
    """Partial sum written through modulations and half-line projections.

    ``exp(i(n+1)x) P_-( exp(-2i(n+1)x) P_+( exp(i(n+1)x) f ))``.  With
    ``literal=True`` the half-line operators are ``(I -+ iH)/2`` as written,
    which leaves half of the ``|k| = n+1`` coefficients behind.
    """
    plus = (lambda g: 0.5 * (g + 1j * hilbert_transform(g))) if literal else riesz_plus
    minus = (lambda g: 0.5 * (g - 1j * hilbert_transform(g))) if literal else riesz_minus
    g = plus(modulate(f, n + 1))
    g = minus(modulate(g, -2 * (n + 1)))
    g = modulate(g, n + 1)
    d = g.degree
    keep = max(n, min(f.degree, n + 1)) if literal else n
    return TrigPoly(g.coeffs[d - keep:d + keep + 1])


# ---------------------------------------------------------------------------
# random families
# ---------------------------------------------------------------------------

DISTRIBUTIONS = ("gaussian", "sparse", "lacunary")


def _std_complex(rng, size):
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def random_poly(n, seed, distribution="gaussian"):
    """Deterministic random polynomial of degree ``n``.

    ``gaussian``: i.i.d. standard complex normal coefficients.
    ``sparse``: three nonzero coefficients at random frequencies (fewer if
    ``2n+1 < 3``).
    ``lacunary``: nonzero coefficients only at ``k = +-2**j``.
    """
    if n < 0:
        raise ParameterError("n must be non-negative")
    rng = np.random.default_rng(seed)
    a = np.zeros(2 * n + 1, complex)
    if distribution == "gaussian":
        a[:] = _std_complex(rng, 2 * n + 1)
    elif distribution == "sparse":
        idx = rng.choice(2 * n + 1, size=min(3, 2 * n + 1), replace=False)
        vals = _std_complex(rng, idx.size)
        vals[vals == 0] = 1.0
        a[idx] = vals
    elif distribution == "lacunary":
        ks = []
        j = 0
        while 2 ** j <= n:
            ks += [2 ** j, -(2 ** j)]
            j += 1
        if ks:
            a[np.asarray(ks) + n] = _std_complex(rng, len(ks))
        else:
            a[n] = _std_complex(rng, 1)[0]
    else:
        raise ParameterError(f"unknown distribution {distribution!r}")
    return TrigPoly(a)


# ---------------------------------------------------------------------------
# text serialization
# ---------------------------------------------------------------------------

def dumps(f):
    """``n`` on the first line, then ``Re a_k Im a_k`` for ``k = -n..n``."""
    lines = [str(f.degree)]
    lines += [f"{c.real:.17g} {c.imag:.17g}" for c in f.coeffs]
    return "\n".join(lines) + "\n"


def loads(text):
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ConfigError("empty polynomial file")
    try:
        n = int(rows[0])
        vals = [tuple(float(v) for v in r.split()) for r in rows[1:]]
    except ValueError as exc:
        raise ConfigError(f"malformed polynomial file: {exc}") from None
    if n < 0 or len(vals) != 2 * n + 1 or any(len(v) != 2 for v in vals):
        raise ConfigError(f"expected {2 * n + 1} coefficient rows of two numbers")
    return TrigPoly(np.array([complex(re, im) for re, im in vals]))


def load(path):
    with open(path) as fh:
        return loads(fh.read())


def save(f, path):
    with open(path, "w") as fh:
        fh.write(dumps(f))
