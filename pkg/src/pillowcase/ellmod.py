"""Moduli of pillowcase tori: AGM elliptic integrals, lambda and cross-ratios.

All arithmetic is plain double-precision ``complex``.
"""
from __future__ import annotations

import ast
import cmath
import math
import operator
import re

INF = float("inf")
ZETA3 = cmath.exp(2j * math.pi / 3)
ZETA6 = cmath.exp(1j * math.pi / 3)


class SingularModulus(ValueError):
    pass


class NoConvergence(ArithmeticError):
    pass


class NotInUpperHalfPlane(ValueError):
    pass


class TooCloseToBoundary(ValueError):
    pass


class DegeneratePoints(ValueError):
    pass


def principal_sqrt(z: complex) -> complex:
    """Square root with nonnegative real part; purely imaginary roots get Im >= 0."""
    r = cmath.sqrt(z)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def agm(a: complex, b: complex, max_iter: int = 64) -> complex:
    a, b = complex(a), complex(b)
    for _ in range(max_iter):
        if abs(a - b) <= 1e-16 * abs(a):
            return a
        a, b = (a + b) / 2, principal_sqrt(a * b)
    if abs(a - b) <= 1e-14 * abs(a):
        return a
    raise NoConvergence(f"AGM did not converge in {max_iter} steps")


def agm_K(k: complex) -> complex:
    """Complete elliptic integral of the first kind, ``pi / (2 AGM(1, k'))``."""
    k2 = complex(k) ** 2
    if k2 == 1:
        raise SingularModulus("k^2 = 1")
    return math.pi / (2 * agm(1, principal_sqrt(1 - k2)))


def lambda_section_t(x: complex) -> complex:
    """``tau = i K(sqrt(1-x)) / K(sqrt(x))``, a point in the upper half plane."""
    x = complex(x)
    if x == 0 or x == 1:
        raise DegeneratePoints("cross-ratio must avoid 0 and 1")
    tau = 1j * agm_K(principal_sqrt(1 - x)) / agm_K(principal_sqrt(x))
    if not tau.imag > 0:
        raise NotInUpperHalfPlane(f"tau = {tau}")
    return tau


def _theta_sums(q: complex) -> tuple[complex, complex]:
    # theta2 = 2 q^(1/4) sum q^(n(n+1)); theta3 = 1 + 2 sum q^(n^2)
    s2, s3 = 0j, 1 + 0j
    n = 0
    while True:
        t2 = q ** (n * (n + 1))
        t3 = 2 * q ** ((n + 1) ** 2)
        s2 += t2
        s3 += t3
        if abs(t2) < 1e-18 and abs(t3) < 1e-18:
            return s2, s3
        n += 1


def lambda_theta(tau: complex) -> complex:
    """Modular lambda ``theta2^4 / theta3^4`` from nome series."""
    tau = complex(tau)
    if tau.imag < 0.05:
        raise TooCloseToBoundary(f"Im(tau) = {tau.imag} below 0.05")
    q = cmath.exp(1j * math.pi * tau)
    s2, s3 = _theta_sums(q)
    # theta2^4 = 16 q sum^4, with q^(1/4) raised to the fourth power exactly
    return 16 * q * s2 ** 4 / s3 ** 4


def _is_inf(z) -> bool:
    return isinstance(z, float) and math.isinf(z) or (isinstance(z, complex) and cmath.isinf(z))


def cross_ratio(z1, z2, z3, z4) -> complex:
    """``(z1-z3)(z2-z4) / ((z2-z3)(z1-z4))``; one argument may be ``inf``."""
    pts = [z1, z2, z3, z4]
    infs = [i for i, z in enumerate(pts) if _is_inf(z)]
    if len(infs) > 1:
        raise DegeneratePoints("more than one point at infinity")
    finite = [complex(z) for z in pts if not _is_inf(z)]
    for i in range(len(finite)):
        for j in range(i):
            if finite[i] == finite[j]:
                raise DegeneratePoints("points are not pairwise distinct")

    def diff(i: int, j: int) -> complex | None:
        if i in infs or j in infs:
            return None
        return complex(pts[i]) - complex(pts[j])

    factors = [(0, 2), (1, 3), (1, 2), (0, 3)]
    num = [diff(*f) for f in factors[:2]]
    den = [diff(*f) for f in factors[2:]]
    # a factor containing infinity appears once upstairs and once downstairs
    n = math.prod(f for f in num if f is not None)
    d = math.prod(f for f in den if f is not None)
    return n / d


def lambda_orbit(x: complex) -> list[complex]:
    x = complex(x)
    return [x, 1 / x, 1 - x, 1 / (1 - x), x / (x - 1), (x - 1) / x]


def lambda_orbit_equal(x: complex, y: complex, tol: float = 1e-9) -> bool:
    return any(abs(complex(y) - o) <= tol * max(1.0, abs(o)) for o in lambda_orbit(x))


_CONSTANTS = {
    "i": 1j,
    "zeta3": ZETA3,
    "zeta6": ZETA6,
    "pi": math.pi,
}


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_node(node: ast.AST) -> complex:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return complex(node.value)
    if isinstance(node, ast.Name) and node.id in _CONSTANTS:
        return complex(_CONSTANTS[node.id])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left, right = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Pow) and right.imag == 0 and right.real == int(right.real):
            return left ** int(right.real)
        return _BINOPS[type(node.op)](left, right)
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt" and len(node.args) == 1 and not node.keywords):
        return principal_sqrt(_eval_node(node.args[0]))
    raise ValueError("unsupported expression")


def parse_number(text: str) -> complex | float:
    """Parse ``a+bi``, ``inf``, ``zeta3``, ``zeta6^5``, ``15*sqrt(3)-26`` and similar."""
    s = text.strip().lower().replace(" ", "")
    if s in ("inf", "infinity", "oo"):
        return INF
    # ``2i`` becomes the literal ``2j``; a bare ``i`` stays a name
    expr = re.sub(r"(?<=[0-9.])i\b", "j", s).replace("^", "**")
    try:
        value = _eval_node(ast.parse(expr, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc
    if cmath.isinf(value) or cmath.isnan(value):
        raise ValueError(f"cannot parse number {text!r}")
    return value


def format_number(z: complex) -> str:
    if _is_inf(z):
        return "inf"
    z = complex(z)

    def part(v: float) -> str:
        s = f"{v:.12f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s

    im = part(z.imag)
    return f"{part(z.real)}{'' if im.startswith('-') else '+'}{im}i"
