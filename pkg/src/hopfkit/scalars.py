"""Exact coefficient arithmetic: cyclotomic rationals Q(zeta_N) and finite fields F_{p^k}.

Every scalar is immutable and kept in canonical reduced form, so equality is
component-wise and zero-testing is a tuple comparison.  A field handle owns the
modulus data (cyclotomic polynomial, or irreducible polynomial over F_p) and
hands out elements; scalars from different handles never mix.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from ._rational import ONE, Q, ZERO, is_rat


class FieldError(Exception):
    pass


class NonPrimeCharacteristic(FieldError):
    pass


class RootOrderNotCoprime(FieldError):
    pass


class UnsupportedOrder(FieldError):
    pass


class SquareRootUnavailable(FieldError):
    pass


def _poly_trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact_int(a, b):
    # exact division of integer polynomials, leading coeff of b must be +-1
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficient tuple of Phi_n, ascending degree."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact_int(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _euler_phi(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


class CyclotomicNumber:
    """Element of Q(zeta_N) in the power basis of Q[x]/Phi_N(x)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of Q, length phi(N)

    def _check(self, other):
        if self.field is not other.field:
            raise FieldError("scalars from different fields")

    def __add__(self, other):
        if is_rat(other):
            other = self.field.from_rational(other)
        self._check(other)
        return CyclotomicNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if is_rat(other):
            other = self.field.from_rational(other)
        self._check(other)
        return CyclotomicNumber(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rat(other):
            q = Q(other)
            return CyclotomicNumber(self.field, tuple(a * q for a in self.coeffs))
        self._check(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_rat(other):
            q = Q(other)
            if q == 0:
                raise ZeroDivisionError("division by zero scalar")
            return CyclotomicNumber(self.field, tuple(a / q for a in self.coeffs))
        self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        return self.field._inverse(self)

    def __eq__(self, other):
        if is_rat(other):
            other = self.field.from_rational(other)
        if not isinstance(other, CyclotomicNumber) or other.field is not self.field:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field),) + self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        return self.field.render(self)


class CyclotomicField:
    """Q(zeta_N) with zeta_N the class of x in Q[x]/Phi_N(x)."""

    characteristic = 0

    def __init__(self, conductor):
        if conductor < 1:
            raise FieldError("conductor must be positive")
        self.conductor = conductor
        self.degree = _euler_phi(conductor)
        mod = cyclotomic_polynomial(conductor)
        self._modulus = tuple(Q(c) for c in mod)
        d = self.degree
        # reduction rows: x^k mod Phi_N for k = d .. 2d-2
        rows = []
        cur = [-c for c in self._modulus[:-1]]  # x^d = -(lower part)
        rows.append(tuple(cur))
        for _ in range(d - 2):
            nxt = [ZERO] + cur[:-1]
            top = cur[-1]
            if top:
                nxt = [a + top * b for a, b in zip(nxt, rows[0])]
            cur = nxt
            rows.append(tuple(cur))
        self._red = rows
        self.zero = CyclotomicNumber(self, (ZERO,) * d)
        self.one = self.from_rational(1)

    def element(self, coeffs):
        coeffs = list(coeffs) + [ZERO] * (self.degree - len(coeffs))
        return CyclotomicNumber(self, tuple(Q(c) for c in coeffs[: self.degree]))

    def from_rational(self, q):
        return CyclotomicNumber(self, (Q(q),) + (ZERO,) * (self.degree - 1))

    from_int = from_rational

    def _mul(self, a, b):
        d = self.degree
        conv = [ZERO] * (2 * d - 1)
        ac, bc = a.coeffs, b.coeffs
        for i in range(d):
            x = ac[i]
            if x:
                for j in range(d):
                    y = bc[j]
                    if y:
                        conv[i + j] += x * y
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = self._red[k - d]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return CyclotomicNumber(self, tuple(out))

    def _inverse(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[x] against Phi_N
        r0 = list(self._modulus)
        r1 = _poly_trim(list(a.coeffs))
        s0, s1 = [], [ONE]
        while True:
            if len(r1) == 1:
                inv = ONE / r1[0]
                coeffs = [c * inv for c in s1]
                return self.element(coeffs)
            q, rem = self._poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, self._poly_sub(s0, _poly_trim(self._poly_mulq(q, s1)))
            if not r1:
                raise ZeroDivisionError("inverse of zero divisor (should not happen in a field)")

    @staticmethod
    def _poly_mulq(a, b):
        out = [ZERO] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out

    @staticmethod
    def _poly_sub(a, b):
        n = max(len(a), len(b))
        a = list(a) + [ZERO] * (n - len(a))
        b = list(b) + [ZERO] * (n - len(b))
        return _poly_trim([x - y for x, y in zip(a, b)])

    @classmethod
    def _poly_divmod(cls, a, b):
        a = list(a)
        q = [ZERO] * max(len(a) - len(b) + 1, 0)
        inv = ONE / b[-1]
        for i in range(len(q) - 1, -1, -1):
            c = a[i + len(b) - 1] * inv
            q[i] = c
            if c:
                for j, y in enumerate(b):
                    a[i + j] -= c * y
        return q, _poly_trim(a[: len(b) - 1])

    # -- roots of unity and square roots -------------------------------------

    def root_of_unity(self, order, power=1):
        if order < 1 or self.conductor % order:
            raise UnsupportedOrder(f"no primitive root of order {order} in Q(zeta_{self.conductor})")
        k = (self.conductor // order) * (power % order)
        return self.zeta_power(k)

    def zeta_power(self, k):
        k %= self.conductor
        d = self.degree
        if k < d:
            coeffs = [ZERO] * d
            coeffs[k] = ONE
            return CyclotomicNumber(self, tuple(coeffs))
        return self.zeta_power(1) ** k

    def sqrt_const(self, n):
        """s with s*s == n, via Gauss-sum constructions; needs 4n | conductor."""
        if n < 1:
            raise SquareRootUnavailable("n must be positive")
        target = n
        # split n = sq^2 * sf with sf squarefree
        sq, sf, m, p = 1, 1, n, 2
        while p * p <= m:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            sq *= p ** (e // 2)
            if e % 2:
                sf *= p
            p += 1 if p == 2 else 2
        if m > 1:
            sf *= m
        s = self.from_int(sq)
        rem = sf
        p = 2
        while rem > 1:
            if rem % p == 0:
                rem //= p
                s = s * self._sqrt_prime(p)
            else:
                p += 1 if p == 2 else 2
        s = self._canonical_sign(s)
        if s * s != self.from_int(target):
            raise SquareRootUnavailable(f"sqrt({target}) not representable here")
        return s

    def _sqrt_prime(self, p):
        if p == 2:
            if self.conductor % 8:
                raise SquareRootUnavailable("sqrt(2) needs 8 | conductor")
            z8 = self.root_of_unity(8)
            return z8 + z8 ** 7
        if self.conductor % p:
            raise SquareRootUnavailable(f"sqrt({p}) needs {p} | conductor")
        g = self.zero
        for j in range(1, p):
            leg = pow(j, (p - 1) // 2, p)
            term = self.root_of_unity(p, j)
            g = g + term if leg == 1 else g - term
        if p % 4 == 1:
            return g
        if self.conductor % 4:
            raise SquareRootUnavailable(f"sqrt({p}) needs 4 | conductor for p = 3 mod 4")
        return g * self.root_of_unity(4, 3)  # g^2 = -p, divide by i

    def _canonical_sign(self, s):
        for c in s.coeffs:
            if c > 0:
                return s
            if c < 0:
                return -s
        return s

    def render(self, a):
        if a.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(a.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                unit = f"z{self.conductor}" + (f"^{k}" if k > 1 else "")
                if c == 1:
                    parts.append(unit)
                elif c == -1:
                    parts.append(f"-{unit}")
                else:
                    parts.append(f"{c}*{unit}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Q(zeta_{self.conductor})"


# ---------------------------------------------------------------------------


def _is_probable_prime(p):
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class FiniteFieldNumber:
    """Element of F_{p^k} in the power basis of F_p[x]/f(x)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if is_rat(other):
            return self.field.from_rational(other)
        if other.field is not self.field:
            raise FieldError("scalars from different fields")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        p = self.field.p
        return FiniteFieldNumber(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FiniteFieldNumber(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        p = self.field.p
        return FiniteFieldNumber(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __eq__(self, other):
        if is_rat(other):
            other = self.field.from_rational(other)
        if not isinstance(other, FiniteFieldNumber) or other.field is not self.field:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field),) + self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        return self.field.render(self)


class FiniteField:
    """F_{p^k} with a deterministic irreducible modulus and generator."""

    def __init__(self, p, k, root_orders=()):
        if not _is_probable_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        self.p = p
        self.k = k
        self.characteristic = p
        self.order = p ** k
        self.modulus = self._lowest_irreducible(p, k)
        self.zero = FiniteFieldNumber(self, (0,) * k)
        self.one = self.from_int(1)
        self._x_red = self._reduction_rows()
        self.generator = self._find_generator()
        self.root_orders = tuple(root_orders)

    @staticmethod
    def _poly_mulmod(a, b, mod, p):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        k = len(mod) - 1
        for i in range(len(out) - 1, k - 1, -1):
            c = out[i]
            if c:
                for j in range(k + 1):
                    out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
        return _poly_trim(out[:k]) or [0]

    @classmethod
    def _is_irreducible(cls, f, p):
        # f monic over F_p; check gcd(x^{p^i} - x, f) trivial for i <= deg/2
        k = len(f) - 1
        if k == 1:
            return True
        x = [0, 1]
        xq = x[:]
        for i in range(1, k // 2 + 1):
            xq = cls._poly_powmod(xq, p, f, p)
            diff = cls._poly_submod(xq, x, p)
            if cls._poly_gcd(f, diff, p) != [1]:
                return False
        return True

    @classmethod
    def _poly_powmod(cls, a, n, mod, p):
        out = [1]
        base = a
        while n:
            if n & 1:
                out = cls._poly_mulmod(out, base, mod, p)
            base = cls._poly_mulmod(base, base, mod, p)
            n >>= 1
        return out

    @staticmethod
    def _poly_submod(a, b, p):
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        return _poly_trim([(x - y) % p for x, y in zip(a, b)])

    @classmethod
    def _poly_gcd(cls, a, b, p):
        a, b = _poly_trim(list(a)), _poly_trim(list(b))
        while b:
            inv = pow(b[-1], p - 2, p)
            b_m = [c * inv % p for c in b]
            r = list(a)
            for i in range(len(r) - len(b_m), -1, -1):
                c = r[i + len(b_m) - 1]
                if c:
                    for j, y in enumerate(b_m):
                        r[i + j] = (r[i + j] - c * y) % p
            a, b = b_m, _poly_trim(r[: len(b_m) - 1])
        if not a:
            return []
        inv = pow(a[-1], p - 2, p)
        return [c * inv % p for c in a]

    @classmethod
    def _lowest_irreducible(cls, p, k):
        if k == 1:
            return (0, 1)
        for idx in range(p ** k):
            coeffs = []
            v = idx
            for _ in range(k):
                coeffs.append(v % p)
                v //= p
            f = coeffs + [1]
            if cls._is_irreducible(f, p):
                return tuple(f)
        raise FieldError("no irreducible polynomial found")  # pragma: no cover

    def _reduction_rows(self):
        k = self.k
        rows = []
        cur = [(-c) % self.p for c in self.modulus[:k]]
        rows.append(tuple(cur))
        for _ in range(k - 2):
            nxt = [0] + cur[:-1]
            top = cur[-1]
            if top:
                nxt = [(a + top * b) % self.p for a, b in zip(nxt, rows[0])]
            cur = nxt
            rows.append(tuple(cur))
        return rows

    def element(self, coeffs):
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        return FiniteFieldNumber(self, tuple(c % self.p for c in coeffs[: self.k]))

    def from_int(self, n):
        return FiniteFieldNumber(self, (n % self.p,) + (0,) * (self.k - 1))

    def from_rational(self, q):
        q = Q(q)
        num = int(q.numerator)
        den = int(q.denominator)
        if den % self.p == 0:
            raise FieldError(f"denominator divisible by char {self.p}")
        return self.from_int(num * pow(den, self.p - 2, self.p))

    def _mul(self, a, b):
        k, p = self.k, self.p
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] = (conv[i + j] + x * y) % p
        out = conv[:k]
        for idx in range(k, 2 * k - 1):
            c = conv[idx]
            if c:
                row = self._x_red[idx - k]
                for j in range(k):
                    if row[j]:
                        out[j] = (out[j] + c * row[j]) % p
        return FiniteFieldNumber(self, tuple(out))

    def _elements_in_index_order(self):
        for idx in range(self.order):
            coeffs, v = [], idx
            for _ in range(self.k):
                coeffs.append(v % self.p)
                v //= self.p
            yield FiniteFieldNumber(self, tuple(coeffs))

    def _find_generator(self):
        target = self.order - 1
        factors = set()
        m, q = target, 2
        while q * q <= m:
            while m % q == 0:
                factors.add(q)
                m //= q
            q += 1
        if m > 1:
            factors.add(m)
        for el in self._elements_in_index_order():
            if el.is_zero():
                continue
            if all((el ** (target // f)) != self.one for f in factors):
                return el
        raise FieldError("no generator found")  # pragma: no cover

    def root_of_unity(self, order, power=1):
        if order < 1 or (self.order - 1) % order:
            raise UnsupportedOrder(f"no root of order {order} in F_{self.p}^{self.k}")
        return self.generator ** (((self.order - 1) // order) * (power % order))

    def sqrt_const(self, n):
        target = self.from_int(n)
        for el in self._elements_in_index_order():
            if el * el == target:
                return el
        raise SquareRootUnavailable(f"{n} is not a square in F_{self.p}^{self.k}")

    def render(self, a):
        if self.k == 1:
            return f"{a.coeffs[0]}"
        parts = []
        for k, c in enumerate(a.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                unit = "t" + (f"^{k}" if k > 1 else "")
                parts.append(unit if c == 1 else f"{c}*{unit}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"F_{self.p}^{self.k}"


# ---------------------------------------------------------------------------


def _mult_order(a, n):
    """Multiplicative order of a modulo n (gcd(a, n) == 1)."""
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def make_field(char=0, conductor=1, root_orders=(), p=None):
    """Build a field handle.

    char 0: Q(zeta_conductor), enlarged so every requested root order divides
    the conductor.  char p: the smallest F_{p^k} containing primitive roots of
    every requested order.
    """
    if p is not None:
        char = p
    if char == 0:
        n = conductor
        for d in root_orders:
            n = n * d // gcd(n, d)
        return CyclotomicField(n)
    if char <= 2 or not _is_probable_prime(char):
        raise NonPrimeCharacteristic(f"characteristic {char} not an odd prime")
    k = 1
    for d in root_orders:
        if d <= 0:
            raise UnsupportedOrder("root orders must be positive")
        if gcd(d, char) != 1:
            raise RootOrderNotCoprime(f"order {d} shares a factor with char {char}")
        kd = _mult_order(char, d)
        k = k * kd // gcd(k, kd)
    return FiniteField(char, k, root_orders=root_orders)
