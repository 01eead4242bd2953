"""Exact ground fields: the rationals or a prime field F_p.

Scalars are plain values, not wrapped: Fraction in characteristic 0,
int in [0, p) in characteristic p.  All arithmetic goes through a Field
instance so the rest of the library never branches on the characteristic.
"""

from fractions import Fraction

from .errors import InputError


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """ℚ (characteristic 0) or F_p (characteristic p prime)."""

    def __init__(self, characteristic=0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise InputError("characteristic must be 0 or a prime, got %r" % (characteristic,))
        self.char = characteristic
        if characteristic == 0:
            self.zero = Fraction(0)
            self.one = Fraction(1)
        else:
            self.zero = 0
            self.one = 1

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        if p == 0:
            raise InputError("prime field needs a prime, got 0")
        return cls(p)

    @property
    def kind(self):
        return "rationals" if self.char == 0 else "prime"

    def __repr__(self):
        return "Q" if self.char == 0 else "F_%d" % self.char

    def __eq__(self, other):
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self):
        return hash(("Field", self.char))

    def from_int(self, n):
        if self.char == 0:
            return Fraction(n)
        return n % self.char

    def add(self, a, b):
        if self.char == 0:
            return a + b
        return (a + b) % self.char

    def sub(self, a, b):
        if self.char == 0:
            return a - b
        return (a - b) % self.char

    def mul(self, a, b):
        if self.char == 0:
            return a * b
        return (a * b) % self.char

    def neg(self, a):
        if self.char == 0:
            return -a
        return (-a) % self.char

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverting zero in %r" % self)
        if self.char == 0:
            return 1 / a
        # Fermat: a^(p-2) is the inverse mod p
        return pow(a, self.char - 2, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, token):
        """Parse `[-]digits` or `[-]digits/digits` into a scalar."""
        token = token.strip()
        num, slash, den = token.partition("/")
        try:
            numerator = int(num)
        except ValueError:
            raise InputError("malformed scalar %r" % token)
        if not slash:
            return self.from_int(numerator)
        try:
            denominator = int(den)
        except ValueError:
            raise InputError("malformed scalar %r" % token)
        if denominator == 0:
            raise InputError("zero denominator in %r" % token)
        if self.char == 0:
            return Fraction(numerator, denominator)
        if denominator % self.char == 0:
            raise InputError("denominator of %r is divisible by %d" % (token, self.char))
        return self.mul(self.from_int(numerator), self.inv(self.from_int(denominator)))

    def to_str(self, a):
        return str(a)


def parse_scalar(token, field):
    return field.parse(token)


def invert(x, field):
    return field.inv(x)
