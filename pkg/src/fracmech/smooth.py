r"""
Closed-form functions with exact derivatives of every order.

A :class:`SmoothFn` is stored as a finite sum

.. math::

    f(y) = \sum_i c_i \, y^{\beta_i} e^{z_i y},

with real exponents :math:`\beta_i` and complex rates :math:`z_i`. Sines and
cosines are carried as conjugate exponential pairs, so the family is closed
under addition, multiplication, integer powers and differentiation.
"""
from __future__ import annotations

import ast
import cmath
import math
from typing import Mapping, Union

import numpy as np

Number = Union[int, float, complex]
_Key = tuple  # (beta: float, z: complex)


def _is_nonneg_int(x: float) -> bool:
    return x >= 0 and float(x).is_integer()


def _clean(terms: Mapping[_Key, complex]) -> dict[_Key, complex]:
    return {k: complex(v) for k, v in terms.items() if v != 0}


class SmoothFn:
    """Finite sum of ``c * y**beta * exp(z * y)`` terms (immutable)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[_Key, Number] | None = None):
        cleaned = _clean(terms or {})
        order = sorted(cleaned, key=lambda k: (k[0], k[1].real, k[1].imag))
        object.__setattr__(self, "_terms", tuple((k, cleaned[k]) for k in order))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SmoothFn is immutable")

    # {{{ constructors

    @classmethod
    def const(cls, c: float) -> "SmoothFn":
        return cls({(0.0, 0j): c})

    @classmethod
    def monomial(cls, beta: float = 1.0, c: float = 1.0) -> "SmoothFn":
        if beta < 0:
            raise ValueError(f"monomial exponent must be >= 0, got {beta}")
        return cls({(float(beta), 0j): c})

    @classmethod
    def polynomial(cls, coeffs) -> "SmoothFn":
        """Polynomial from coefficients in increasing degree."""
        return cls({(float(i), 0j): c for i, c in enumerate(coeffs)})

    @classmethod
    def exp(cls, rate: float = 1.0, c: float = 1.0, shift: float = 0.0) -> "SmoothFn":
        """``c * exp(rate * y + shift)``."""
        return cls({(0.0, complex(rate)): c * math.exp(shift)})

    @classmethod
    def sin(cls, freq: float = 1.0, c: float = 1.0, phase: float = 0.0) -> "SmoothFn":
        """``c * sin(freq * y + phase)``."""
        e = cmath.exp(1j * phase)
        if freq == 0:
            return cls.const(c * math.sin(phase))
        return cls({(0.0, 1j * freq): c * e / 2j, (0.0, -1j * freq): -c / (2j * e)})

    @classmethod
    def cos(cls, freq: float = 1.0, c: float = 1.0, phase: float = 0.0) -> "SmoothFn":
        """``c * cos(freq * y + phase)``."""
        e = cmath.exp(1j * phase)
        if freq == 0:
            return cls.const(c * math.cos(phase))
        return cls({(0.0, 1j * freq): c * e / 2, (0.0, -1j * freq): c / (2 * e)})

    @classmethod
    def parse(cls, text: str) -> "SmoothFn":
        """Parse an expression such as ``"2*t^2 + exp(0.5*t) - sin(t)"``."""
        return _Parser(text).run()

    # }}}

    # {{{ structure

    @property
    def terms(self) -> tuple:
        """Sorted ``((beta, z), coefficient)`` pairs."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_power_family(self) -> bool:
        """True when no exponential or trigonometric factors are present."""
        return all(z == 0 for (_, z), _ in self._terms)

    def is_polynomial(self) -> bool:
        return all(z == 0 and _is_nonneg_int(b) for (b, z), _ in self._terms)

    @property
    def degree(self) -> int:
        if not self.is_polynomial():
            raise ValueError(f"{self!r} is not a polynomial")
        if self.is_zero():
            return -1
        return int(max(b for (b, _), _ in self._terms))

    def power_terms(self) -> list[tuple[float, float]]:
        """``(coefficient, beta)`` pairs for a power-family function."""
        if not self.is_power_family():
            raise ValueError(f"{self!r} has exponential or trigonometric factors")
        return [(c.real, b) for (b, _), c in self._terms]

    # }}}

    # {{{ arithmetic

    def __add__(self, other) -> "SmoothFn":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms:
            out[k] = out.get(k, 0) + c
        return SmoothFn(out)

    __radd__ = __add__

    def __neg__(self) -> "SmoothFn":
        return SmoothFn({k: -c for k, c in self._terms})

    def __sub__(self, other) -> "SmoothFn":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "SmoothFn":
        return (-self) + other

    def __mul__(self, other) -> "SmoothFn":
        if isinstance(other, (int, float, complex, np.number)):
            return SmoothFn({k: c * other for k, c in self._terms})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[_Key, complex] = {}
        for (b1, z1), c1 in self._terms:
            for (b2, z2), c2 in other._terms:
                k = (b1 + b2, z1 + z2)
                out[k] = out.get(k, 0) + c1 * c2
        return SmoothFn(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SmoothFn":
        if not isinstance(other, (int, float, np.number)):
            return NotImplemented
        return self * (1.0 / other)

    def __pow__(self, n: int) -> "SmoothFn":
        if not (isinstance(n, (int, np.integer)) and n >= 0):
            raise ValueError(f"only non-negative integer powers are supported, got {n!r}")
        out = SmoothFn.const(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SmoothFn):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._terms))
        return self._hash

    # }}}

    # {{{ calculus

    def deriv(self, s: int = 1) -> "SmoothFn":
        """Exact ``s``-th derivative."""
        if s < 0:
            raise ValueError(f"derivative order must be >= 0, got {s}")
        f = self
        for _ in range(s):
            out: dict[_Key, complex] = {}
            for (b, z), c in f._terms:
                if b != 0:
                    k = (b - 1.0, z)
                    out[k] = out.get(k, 0) + c * b
                if z != 0:
                    out[(b, z)] = out.get((b, z), 0) + c * z
            f = SmoothFn(out)
            if f.is_zero():
                break
        return f

    def substitute(self, shift: float = 0.0, scale: float = 1.0) -> "SmoothFn":
        """Return ``u -> f(shift + scale * u)``.

        Non-integer exponents are only allowed with ``shift == 0`` and
        ``scale > 0``.
        """
        if shift == 0 and scale == 1:
            return self
        out: dict[_Key, complex] = {}
        for (b, z), c in self._terms:
            cz = c * cmath.exp(z * shift)
            zz = z * scale
            if _is_nonneg_int(b):
                n = int(b)
                for j in range(n + 1):
                    coef = cz * math.comb(n, j) * shift ** (n - j) * scale**j
                    k = (float(j), zz)
                    out[k] = out.get(k, 0) + coef
            elif shift == 0 and scale > 0:
                k = (b, zz)
                out[k] = out.get(k, 0) + cz * scale**b
            else:
                raise ValueError(
                    f"cannot shift non-integer power y^{b} (shift={shift}, scale={scale})"
                )
        return SmoothFn(out)

    def compose(self, inner: "SmoothFn") -> "SmoothFn":
        """Return ``f(inner(y))``; requires ``f`` to be a polynomial."""
        if not self.is_polynomial():
            raise ValueError("composition is only closed for polynomial outer functions")
        coeffs = [0.0] * (self.degree + 1)
        for (b, _), c in self._terms:
            coeffs[int(b)] = c
        out = SmoothFn()
        for c in reversed(coeffs):
            out = out * inner + SmoothFn.const(1.0) * c
        return out

    # }}}

    # {{{ evaluation

    def __call__(self, y):
        y_arr = np.asarray(y, dtype=np.float64)
        scalar = y_arr.ndim == 0
        y_arr = np.atleast_1d(y_arr)
        real = np.zeros(y_arr.shape)
        cplx = np.zeros(y_arr.shape, dtype=np.complex128)
        has_cplx = False
        for (b, z), c in self._terms:
            if b == 0:
                p = 1.0
            elif float(b).is_integer():
                p = y_arr ** int(b) if b > 0 else 1.0 / y_arr ** int(-b)
            else:
                if np.any(y_arr < 0):
                    raise ValueError(f"y^{b} is undefined for negative y")
                with np.errstate(divide="ignore"):
                    p = y_arr**b
            if z == 0 and c.imag == 0:
                real = real + c.real * p
            else:
                has_cplx = True
                cplx = cplx + c * p * np.exp(z * y_arr)
        out = real + cplx.real if has_cplx else real
        return float(out[0]) if scalar else out

    # }}}

    def __repr__(self) -> str:
        if not self._terms:
            return "SmoothFn(0)"
        parts = []
        for (b, z), c in self._terms:
            s = f"({c.real:.12g}" + (f"{c.imag:+.12g}j)" if c.imag else ")")
            if b:
                s += f"*y^{b:g}"
            if z:
                s += f"*exp(({z.real:g}{z.imag:+g}j)*y)"
            parts.append(s)
        return "SmoothFn(" + " + ".join(parts) + ")"


def _coerce(x) -> SmoothFn:
    if isinstance(x, SmoothFn):
        return x
    if isinstance(x, (int, float, np.number)):
        return SmoothFn.const(float(x))
    return NotImplemented


# {{{ parser

_VARIABLES = {"t", "y", "x"}
_CONSTANTS = {"pi": math.pi, "e": math.e}


class FunctionSpecError(ValueError):
    """Raised when an expression falls outside the supported function family."""


class _Parser:
    def __init__(self, text: str):
        self.text = text

    def fail(self, msg: str) -> FunctionSpecError:
        return FunctionSpecError(f"cannot parse {self.text!r}: {msg}")

    def run(self) -> SmoothFn:
        try:
            tree = ast.parse(self.text.replace("^", "**").strip(), mode="eval")
        except SyntaxError as exc:
            raise self.fail(f"syntax error ({exc.msg})") from None
        return self.visit(tree.body)

    def number(self, node) -> float | None:
        try:
            fn = self.visit(node)
        except FunctionSpecError:
            return None
        if all(k == (0.0, 0j) for k, _ in fn.terms):
            return fn.terms[0][1].real if fn.terms else 0.0
        return None

    def visit(self, node) -> SmoothFn:
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return SmoothFn.const(float(node.value))
        if isinstance(node, ast.Name):
            if node.id in _VARIABLES:
                return SmoothFn.monomial(1.0)
            if node.id in _CONSTANTS:
                return SmoothFn.const(_CONSTANTS[node.id])
            raise self.fail(f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.visit(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            return self.binop(node)
        if isinstance(node, ast.Call):
            return self.call(node)
        raise self.fail(f"unsupported syntax {type(node).__name__}")

    def binop(self, node: ast.BinOp) -> SmoothFn:
        if isinstance(node.op, ast.Pow):
            base = self.visit(node.left)
            p = self.number(node.right)
            if p is None:
                raise self.fail("exponents must be numeric constants")
            if _is_nonneg_int(p):
                return base ** int(p)
            # real powers only of a single positive monomial c*t^g
            if len(base.terms) == 1:
                (b, z), c = base.terms[0]
                if z == 0 and c.imag == 0 and c.real > 0 and p > 0:
                    return SmoothFn({(b * p, 0j): c.real**p})
            raise self.fail(f"non-integer power {p} of a non-monomial")
        left, right = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            d = self.number(node.right)
            if d is None or d == 0:
                raise self.fail("division only by non-zero constants")
            return left / d
        raise self.fail(f"unsupported operator {type(node.op).__name__}")

    def call(self, node: ast.Call) -> SmoothFn:
        if not isinstance(node.func, ast.Name) or node.func.id not in ("exp", "sin", "cos"):
            raise self.fail("only exp, sin and cos are supported")
        if len(node.args) != 1 or node.keywords:
            raise self.fail(f"{node.func.id} takes exactly one argument")
        arg = self.visit(node.args[0])
        rate = shift = 0.0
        for (b, z), c in arg.terms:
            if z != 0 or c.imag != 0 or b not in (0.0, 1.0):
                raise self.fail(f"argument of {node.func.id} must be affine in t")
            if b == 0.0:
                shift = c.real
            else:
                rate = c.real
        ctor = getattr(SmoothFn, node.func.id)
        if node.func.id == "exp":
            return ctor(rate, shift=shift)
        return ctor(rate, phase=shift)

# }}}
