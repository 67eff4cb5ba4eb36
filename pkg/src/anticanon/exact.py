"""Exact arithmetic kernel: Gaussian rationals, multivariate polynomials, rational functions.

Everything in this module is exact.  Scalars are ``a + b*i`` with
:class:`fractions.Fraction` parts; polynomials are dictionaries mapping
exponent tuples to scalars; rational functions are reduced
numerator/denominator pairs with a monic denominator.

Canonical form conventions (relied on throughout the package):

* polynomial variables are stored as a naturally-sorted tuple (``z2`` before
  ``z10``) and unused variables are dropped, so equal polynomials compare and
  hash equal regardless of how they were built;
* the monomial order is graded lexicographic (total degree first, then
  exponent tuple) with respect to the stored variable order;
* "monic" always means leading coefficient one in that order;
* printing lists terms leading-first and round-trips through the parser.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import SingularMatrix

# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class ExactScalar:
    """A Gaussian rational ``re + im*i`` with exact rational parts.

    Floats are rejected on construction: every scalar entering the symbolic
    layer must be exact.  Use :meth:`to_complex` at the numeric boundary.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("ExactScalar is immutable")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero() -> "ExactScalar":
        return _SC_ZERO

    @staticmethod
    def one() -> "ExactScalar":
        return _SC_ONE

    @staticmethod
    def i() -> "ExactScalar":
        return _SC_I

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.re * o.re - self.im * o.im,
                           self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero scalar")
        return ExactScalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> "ExactScalar":
        """|z|^2 as an exact (real) scalar."""
        return ExactScalar(self.re * self.re + self.im * self.im)

    # -- conversions --------------------------------------------------------
    def to_complex(self) -> complex:
        return complex(self.re) + 1j * float(self.im)

    def __complex__(self) -> complex:
        return self.to_complex()

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactScalar({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


_SC_ZERO = ExactScalar(0)
_SC_ONE = ExactScalar(1)
_SC_I = ExactScalar(0, 1)


def as_scalar(x) -> ExactScalar:
    """Coerce an int/Fraction/ExactScalar to :class:`ExactScalar`."""
    if isinstance(x, ExactScalar):
        return x
    return ExactScalar(_as_fraction(x))


def format_scalar(c: ExactScalar) -> str:
    """Canonical text for a scalar; parses back to the same value."""
    if c.is_zero():
        return "0"
    parts = []
    if c.re:
        parts.append(str(c.re))
    if c.im:
        if c.im == 1:
            im = "i"
        elif c.im == -1:
            im = "-i"
        else:
            im = f"{c.im}*i"
        if parts and not im.startswith("-"):
            parts.append("+" + im)
        else:
            parts.append(im)
    return "".join(parts)


# ---------------------------------------------------------------------------
# variable-name ordering
# ---------------------------------------------------------------------------

_CHUNK = _re.compile(r"(\d+)")


def _nat_key(name: str):
    """Natural sort key: ``z2`` sorts before ``z10``."""
    parts = []
    for piece in _CHUNK.split(name):
        if not piece:
            continue
        if piece.isdigit():
            parts.append((1, int(piece)))
        else:
            parts.append((0, piece))
    return tuple(parts)


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b), key=_nat_key))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def grlex_key(exponents: tuple[int, ...]):
    """Sort key implementing the graded lexicographic order."""
    return (sum(exponents), exponents)


class Poly:
    """Multivariate polynomial over the Gaussian rationals in canonical form."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], ExactScalar],
                 variables: Sequence[str] = ()):
        variables = tuple(variables)
        clean: dict[tuple[int, ...], ExactScalar] = {}
        for exp, coeff in terms.items():
            exp = tuple(exp)
            if len(exp) != len(variables):
                raise ValueError("exponent arity does not match variable list")
            coeff = as_scalar(coeff)
            if not coeff.is_zero():
                clean[exp] = coeff
        # drop unused variables, then sort the remainder naturally
        if variables:
            used = [k for k in range(len(variables))
                    if any(e[k] for e in clean)]
            order = sorted(used, key=lambda k: _nat_key(variables[k]))
            if order != list(range(len(variables))):
                variables = tuple(variables[k] for k in order)
                clean = {tuple(e[k] for k in order): c for e, c in clean.items()}
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero() -> "Poly":
        return _P_ZERO

    @staticmethod
    def const(c) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return _P_ZERO
        return Poly({(): c}, ())

    @staticmethod
    def one() -> "Poly":
        return _P_ONE

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({(1,): _SC_ONE}, (name,))

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> ExactScalar:
        """The value of a constant polynomial (zero allowed)."""
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), _SC_ZERO)

    def total_degree(self) -> int:
        """Maximal total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0 if self.terms else -1
        k = self.vars.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    # -- leading data (graded lexicographic) --------------------------------
    def leading_exponent(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> ExactScalar:
        return self.terms[self.leading_exponent()]

    def monic(self) -> "Poly":
        """Divide by the leading coefficient; zero stays zero."""
        if self.is_zero():
            return self
        lc = self.leading_coeff()
        if lc.is_one():
            return self
        return self.scale(lc.inverse())

    # -- alignment ----------------------------------------------------------
    def _reindexed(self, variables: tuple[str, ...]) -> dict:
        """Terms of ``self`` written against a superset variable tuple."""
        if variables == self.vars:
            return dict(self.terms)
        pos = [variables.index(v) for v in self.vars]
        width = len(variables)
        out = {}
        for exp, c in self.terms.items():
            full = [0] * width
            for p, e in zip(pos, exp):
                full[p] = e
            out[tuple(full)] = c
        return out

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, ExactScalar)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        variables = _merge_vars(self.vars, o.vars)
        terms = self._reindexed(variables)
        for exp, c in o._reindexed(variables).items():
            acc = terms.get(exp)
            terms[exp] = c if acc is None else acc + c
        return Poly(terms, variables)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self.scale(as_scalar(other))
        if not isinstance(other, Poly):
            return NotImplemented
        variables = _merge_vars(self.vars, other.vars)
        a = self._reindexed(variables)
        b = other._reindexed(variables)
        terms: dict[tuple[int, ...], ExactScalar] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                acc = terms.get(exp)
                terms[exp] = c if acc is None else acc + c
        return Poly(terms, variables)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return _P_ZERO
        return Poly({e: k * c for e, k in self.terms.items()}, self.vars)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self.scale(as_scalar(other).inverse())
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = _P_ONE
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus -----------------------------------------------------------
    def derivative(self, name: str) -> "Poly":
        if name not in self.vars:
            return _P_ZERO
        k = self.vars.index(name)
        terms: dict[tuple[int, ...], ExactScalar] = {}
        for exp, c in self.terms.items():
            e = exp[k]
            if not e:
                continue
            new = list(exp)
            new[k] = e - 1
            terms[tuple(new)] = c * e
        return Poly(terms, self.vars)

    # -- evaluation / substitution ------------------------------------------
    def eval_exact(self, point: Mapping[str, ExactScalar]) -> ExactScalar:
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise ValueError(f"missing values for {missing}")
        total = _SC_ZERO
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(self.vars, exp):
                if e:
                    val = as_scalar(point[v])
                    for _ in range(e):
                        term = term * val
            total = total + term
        return total

    def eval_complex(self, point: Mapping[str, complex]) -> complex:
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise ValueError(f"missing values for {missing}")
        total = 0j
        for exp, c in self.terms.items():
            term = c.to_complex()
            for v, e in zip(self.vars, exp):
                if e:
                    term *= complex(point[v]) ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "Poly | ExactScalar | int | Fraction"]) -> "Poly":
        """Replace some variables by polynomials or scalars.

        Variables absent from ``mapping`` are kept.
        """
        out = _P_ZERO
        for exp, c in self.terms.items():
            term = Poly.const(c)
            for v, e in zip(self.vars, exp):
                if not e:
                    continue
                if v in mapping:
                    repl = mapping[v]
                    base = repl if isinstance(repl, Poly) else Poly.const(repl)
                else:
                    base = Poly.var(v)
                term = term * base ** e
            out = out + term
        return out

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.vars == o.vars and self.terms == o.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- printing -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], ExactScalar]]:
        """Terms sorted leading-first in the graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]),
                      reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<Poly {self}>"


_P_ZERO = Poly({}, ())
_P_ONE = Poly({(): _SC_ONE}, ())


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(as_scalar(x))


def _format_monomial(variables: tuple[str, ...], exp: tuple[int, ...]) -> str:
    pieces = []
    for v, e in zip(variables, exp):
        if e == 0:
            continue
        pieces.append(v if e == 1 else f"{v}^{e}")
    return "*".join(pieces)


def format_poly(p: Poly) -> str:
    """Canonical text form; ``parse_poly(format_poly(p)) == p``."""
    if p.is_zero():
        return "0"
    chunks: list[tuple[str, str]] = []
    for exp, c in p.sorted_terms():
        mono = _format_monomial(p.vars, exp)
        if not mono:
            body = format_scalar(c)
            sign = "-" if body.startswith("-") else "+"
            if sign == "-":
                body = body[1:]
            # a complex constant with both parts needs parentheses when it
            # follows another term ("a + (1+i)" rather than "a + 1+i")
            if "+" in body or "-" in body[1:]:
                body, sign = f"({format_scalar(c)})", "+"
        elif c.is_one():
            body, sign = mono, "+"
        elif c == ExactScalar(-1):
            body, sign = mono, "-"
        elif c.is_real():
            sign = "-" if c.re < 0 else "+"
            mag = c if c.re > 0 else -c
            body = f"{format_scalar(mag)}*{mono}"
        elif not c.re:  # purely imaginary
            sign = "-" if c.im < 0 else "+"
            mag = c if c.im > 0 else -c
            prefix = "i" if mag.im == 1 else f"{mag.im}*i"
            body = f"{prefix}*{mono}"
        else:
            body, sign = f"({format_scalar(c)})*{mono}", "+"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------


def _exp_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def poly_divmod(p: Poly, d: Poly) -> tuple[Poly, Poly]:
    """Single-divisor multivariate division: ``p = q*d + r``.

    Terms whose leading monomial the divisor's leading monomial does not
    divide are moved to the remainder.  ``r`` is zero exactly when ``d``
    divides ``p``.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    variables = _merge_vars(p.vars, d.vars)
    work = dict(p._reindexed(variables))
    dterms = d._reindexed(variables)
    dlead = max(dterms, key=grlex_key)
    dlc = dterms[dlead]
    quot: dict[tuple[int, ...], ExactScalar] = {}
    rem: dict[tuple[int, ...], ExactScalar] = {}
    while work:
        lead = max(work, key=grlex_key)
        lc = work.pop(lead)
        if _exp_divides(dlead, lead):
            shift = tuple(a - b for a, b in zip(lead, dlead))
            factor = lc / dlc
            quot[shift] = quot.get(shift, _SC_ZERO) + factor
            for exp, c in dterms.items():
                if exp == dlead:
                    continue
                tgt = tuple(a + b for a, b in zip(exp, shift))
                acc = work.get(tgt, _SC_ZERO) - factor * c
                if acc.is_zero():
                    work.pop(tgt, None)
                else:
                    work[tgt] = acc
        else:
            rem[lead] = lc
    return Poly(quot, variables), Poly(rem, variables)


def exact_divide(p: Poly, d: Poly) -> Poly | None:
    """Return ``p / d`` when the division is exact, else ``None``."""
    q, r = poly_divmod(p, d)
    return q if r.is_zero() else None


def divides(d: Poly, p: Poly) -> bool:
    """True when ``d`` divides ``p`` exactly (zero divides only zero)."""
    if d.is_zero():
        return p.is_zero()
    if p.is_zero():
        return True
    return exact_divide(p, d) is not None


# ---------------------------------------------------------------------------
# gcd and squarefree decomposition
# ---------------------------------------------------------------------------

# The gcd works recursively: view both inputs as univariate in the first
# shared material variable, run a primitive-remainder sequence there, and
# recurse into the coefficient ring for contents.  Characteristic zero and
# exact coefficients make this straightforward if not the fastest known way.


def _univ(p: Poly, name: str) -> dict[int, Poly]:
    """Split ``p`` as a univariate polynomial in ``name`` with Poly coefficients."""
    if name not in p.vars:
        return {0: p} if not p.is_zero() else {}
    k = p.vars.index(name)
    rest = p.vars[:k] + p.vars[k + 1:]
    buckets: dict[int, dict[tuple[int, ...], ExactScalar]] = {}
    for exp, c in p.terms.items():
        deg = exp[k]
        red = exp[:k] + exp[k + 1:]
        buckets.setdefault(deg, {})[red] = c
    return {d: Poly(t, rest) for d, t in buckets.items()}


def _univ_to_poly(u: Mapping[int, Poly], name: str) -> Poly:
    x = Poly.var(name)
    total = _P_ZERO
    for d, coeff in u.items():
        total = total + coeff * x ** d
    return total


def _univ_degree(u: Mapping[int, Poly]) -> int:
    return max(u, default=-1)


def _univ_scale(u: Mapping[int, Poly], f: Poly) -> dict[int, Poly]:
    return {d: c * f for d, c in u.items()}


def _univ_sub(a: Mapping[int, Poly], b: Mapping[int, Poly]) -> dict[int, Poly]:
    out = dict(a)
    for d, c in b.items():
        acc = out.get(d, _P_ZERO) - c
        if acc.is_zero():
            out.pop(d, None)
        else:
            out[d] = acc
    return out


def _univ_shift(u: Mapping[int, Poly], k: int) -> dict[int, Poly]:
    return {d + k: c for d, c in u.items()}


def poly_gcd_list(polys: Iterable[Poly]) -> Poly:
    """Monic gcd of a family; zero entries are skipped."""
    g = _P_ZERO
    for p in polys:
        if p.is_zero():
            continue
        g = p.monic() if g.is_zero() else poly_gcd(g, p)
        if g == _P_ONE:
            return g
    return g


def _content(u: Mapping[int, Poly]) -> Poly:
    return poly_gcd_list(u.values())


def _primitive(u: Mapping[int, Poly]) -> dict[int, Poly]:
    """Primitive part up to units: divide out the content *and* rescale so
    the leading coefficient's leading scalar is 1.  Without the scalar
    normalization the pseudo-remainder sequence accumulates unit factors
    multiplicatively and coefficient sizes explode exponentially."""
    if not u:
        return {}
    cont = _content(u)
    if cont == _P_ONE:
        out = dict(u)
    else:
        out = {}
        for d, c in u.items():
            q = exact_divide(c, cont)
            assert q is not None, "content must divide every coefficient"
            out[d] = q
    lead_scalar = out[max(out)].leading_coeff()
    if lead_scalar != _SC_ONE:
        inv = lead_scalar.inverse()
        out = {d: c.scale(inv) for d, c in out.items()}
    return out


def _prem(a: dict[int, Poly], b: dict[int, Poly]) -> dict[int, Poly]:
    """Pseudo-remainder of univariate-with-Poly-coefficient polynomials."""
    db = _univ_degree(b)
    lcb = b[db]
    r = dict(a)
    while r and _univ_degree(r) >= db:
        dr = _univ_degree(r)
        lcr = r[dr]
        r = _univ_sub(_univ_scale(r, lcb), _univ_shift(_univ_scale(b, lcr), dr - db))
    return r


def _scalar_image(u: Mapping[int, Poly], name: str,
                  point: Mapping[str, ExactScalar]) -> Poly:
    """Evaluate the Poly coefficients at ``point``, keeping ``name`` symbolic."""
    terms: dict[tuple[int, ...], ExactScalar] = {}
    for d, c in u.items():
        val = c.eval_exact(point)
        if not val.is_zero():
            terms[(d,)] = val
    return Poly(terms, (name,))


def _gcd_free_of_main(ua: Mapping[int, Poly], ub: Mapping[int, Poly],
                      name: str, rest: Sequence[str]) -> bool:
    """Decide whether the gcd has degree zero in ``name`` via evaluation.

    Substituting small integers for the other variables is a ring map, so the
    gcd maps onto a common divisor of the two univariate images; as long as
    neither leading coefficient vanishes at the point, the image of the gcd
    keeps its full degree in ``name``.  A constant image gcd therefore proves
    the gcd is free of ``name``.  The check is deterministic (fixed point
    sequence) and one-sided: False only means the screen was inconclusive.
    """
    da, db = _univ_degree(ua), _univ_degree(ub)
    lca, lcb = ua[da], ub[db]
    inconclusive = 0
    for trial in range(6):
        point = {v: ExactScalar(trial + 1 + 2 * k) for k, v in enumerate(rest)}
        if lca.eval_exact(point).is_zero() or lcb.eval_exact(point).is_zero():
            continue
        fa = _scalar_image(ua, name, point)
        fb = _scalar_image(ub, name, point)
        if poly_gcd(fa, fb).is_constant():
            return True
        inconclusive += 1
        if inconclusive >= 2:
            return False
    return False


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two polynomials, not both zero."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return _P_ONE
    # Cheap screen: one exact division settles the frequent case where one
    # argument divides the other (e.g. reducing p*q / q).
    small, large = (a, b) if a.total_degree() <= b.total_degree() else (b, a)
    if exact_divide(large, small) is not None:
        return small.monic()
    merged = _merge_vars(a.vars, b.vars)
    if len(merged) >= 2:
        # Eliminate variables the gcd provably does not involve before falling
        # back to a pseudo-remainder sequence: if the gcd is free of a
        # variable it divides both contents with respect to it, and the
        # content gcd in turn divides both inputs, so they agree.  This keeps
        # dense many-variable reductions from feeding the remainder sequence,
        # whose coefficients otherwise swell exponentially.
        for name in merged:
            ua, ub = _univ(a, name), _univ(b, name)
            rest = [v for v in merged if v != name]
            if (_univ_degree(ua) == 0 or _univ_degree(ub) == 0
                    or _gcd_free_of_main(ua, ub, name, rest)):
                return poly_gcd(_content(ua), _content(ub))
    name = merged[0]
    ua, ub = _univ(a, name), _univ(b, name)
    cont = poly_gcd(_content(ua), _content(ub))
    pa, pb = _primitive(ua), _primitive(ub)
    if _univ_degree(pa) < _univ_degree(pb):
        pa, pb = pb, pa
    while pb:
        r = _prem(pa, pb)
        pa, pb = pb, _primitive(r) if r else {}
    return (cont * _univ_to_poly(pa, name)).monic()


def squarefree_decompose(p: Poly) -> tuple[ExactScalar, tuple[tuple[Poly, int], ...]]:
    """Write ``p = scale * prod(f_k ** m_k)`` with monic squarefree coprime ``f_k``.

    Uses the characteristic-zero identity that gcd(p, all partials of p)
    collects every factor with multiplicity one less.  Factors are returned
    sorted by multiplicity, then by leading monomial.
    """
    if p.is_zero():
        raise ValueError("cannot decompose the zero polynomial")
    scale = p.leading_coeff()
    phat = p.monic()
    if phat.is_constant():
        return scale, ()

    def _reduced(q: Poly) -> Poly:
        parts = [q] + [q.derivative(v) for v in q.vars]
        return poly_gcd_list(parts)

    # chain[j] = product of factors with multiplicity > j, starting at phat
    chain = [phat]
    while not chain[-1].is_constant():
        chain.append(_reduced(chain[-1]))
    # levels[k] = product of factors with multiplicity >= k+1, squarefree'd:
    # C_{k+1} = chain[k] / chain[k+1]
    levels = []
    for j in range(len(chain) - 1):
        q = exact_divide(chain[j], chain[j + 1])
        assert q is not None
        levels.append(q)
    factors = []
    for k in range(1, len(levels) + 1):
        if k < len(levels):
            f = exact_divide(levels[k - 1], levels[k])
            assert f is not None
        else:
            f = levels[k - 1]
        if not f.is_constant():
            factors.append((f.monic(), k))
    factors.sort(key=lambda fm: (fm[1], grlex_key(fm[0].leading_exponent())))
    return scale, tuple(factors)


def squarefree_part(p: Poly) -> Poly:
    """Product of the distinct monic factors of ``p``."""
    _, factors = squarefree_decompose(p)
    out = _P_ONE
    for f, _m in factors:
        out = out * f
    return out.monic()


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix by fraction-free elimination.

    Bareiss one-step elimination: every interior division is exact, so the
    computation stays in the polynomial ring.
    """
    n = len(rows)
    m = [[as_poly(e) for e in row] for row in rows]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if n == 0:
        return _P_ONE
    sign = 1
    prev = _P_ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if pivot is None:
                return _P_ZERO
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q = exact_divide(num, prev)
                assert q is not None, "Bareiss division must be exact"
                m[i][j] = q
            m[i][k] = _P_ZERO
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def poly_det_cofactor(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by Laplace expansion.  Slow; kept as an independent check."""
    n = len(rows)
    m = [[as_poly(e) for e in row] for row in rows]
    if n == 0:
        return _P_ONE
    if n == 1:
        return m[0][0]
    total = _P_ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [[m[i][c] for c in range(n) if c != j] for i in range(1, n)]
        cof = m[0][j] * poly_det_cofactor(minor)
        total = total + (cof if j % 2 == 0 else -cof)
    return total


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Quotient of polynomials, stored reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _P_ONE):
        num = as_poly(num)
        den = as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = _P_ZERO, _P_ONE
        else:
            g = poly_gcd(num, den)
            if g != _P_ONE:
                num = exact_divide(num, g)
                den = exact_divide(den, g)
            lc = den.leading_coeff()
            if not lc.is_one():
                inv = lc.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("RatFunc is immutable")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(_P_ZERO)

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(_P_ONE)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == _P_ONE

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction, ExactScalar)):
            return RatFunc(as_poly(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- calculus -----------------------------------------------------------
    def derivative(self, name: str) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative(name) * d - n * d.derivative(name), d * d)

    # -- evaluation ---------------------------------------------------------
    def eval_exact(self, point: Mapping[str, ExactScalar]) -> ExactScalar:
        dv = self.den.eval_exact(point)
        if dv.is_zero():
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.eval_exact(point) / dv

    def eval_complex(self, point: Mapping[str, complex]) -> complex:
        return self.num.eval_complex(point) / self.den.eval_complex(point)

    # -- comparison / printing ----------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_poly():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"<RatFunc {self}>"


def ratmat_inverse(matrix: Sequence[Sequence["RatFunc | Poly"]]) -> list[list[RatFunc]]:
    """Exact inverse of a square matrix over the rational-function field.

    Gauss-Jordan elimination with the first nonzero entry as pivot; raises
    :class:`SingularMatrix` when the matrix is not invertible.
    """
    n = len(matrix)
    work = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError("matrix must be square")
        aug = [e if isinstance(e, RatFunc) else RatFunc(as_poly(e)) for e in row]
        aug += [RatFunc.one() if j == i else RatFunc.zero() for j in range(n)]
        work.append(aug)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrix("matrix has no inverse over the function field")
        work[col], work[pivot] = work[pivot], work[col]
        inv = RatFunc.one() / work[col][col]
        work[col] = [e * inv for e in work[col]]
        for r in range(n):
            if r == col or work[r][col].is_zero():
                continue
            f = work[r][col]
            work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]


def ratmat_det(matrix: Sequence[Sequence["RatFunc | Poly"]]) -> RatFunc:
    """Determinant over the rational-function field (via polynomial parts)."""
    n = len(matrix)
    rows = [[e if isinstance(e, RatFunc) else RatFunc(as_poly(e)) for e in row]
            for row in matrix]
    num_rows = []
    den = RatFunc.one()
    for row in rows:
        d = _P_ONE
        for e in row:
            d = d * e.den
        num_rows.append([(e.num * exact_divide(d, e.den)) for e in row])
        den = den * RatFunc(d)
    return RatFunc(poly_det(num_rows)) / den
