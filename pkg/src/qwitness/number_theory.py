"""Integer predicates backing the witness oracles.

Everything here is exact over the unsigned 64-bit range; no probabilistic
shortcuts. Factor-hungry operations (``mobius``, ``factorize``) run trial
division against a fixed prime pool and reject inputs whose cofactor is
neither prime nor a prime square, rather than guessing.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

from .errors import DomainError

U64_MAX = 2**64 - 1

# Witness bases that make Miller-Rabin deterministic for all n < 3.3e24,
# which covers the 64-bit range with room to spare.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Trial-division pool bound. Cofactors surviving the pool must be prime or a
# prime square; anything else is rejected with a clear error.
_TRIAL_LIMIT = 100_000

# Memory guard for sieving; desk-scale tool, not a prime-counting service.
_SIEVE_LIMIT = 200_000_000


def _check_u64(value: int, name: str = "value") -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < 0 or value > U64_MAX:
        raise DomainError(f"{name} must be in [0, 2^64), got {value}")
    return value


def is_prime(k: int) -> bool:
    """Deterministic primality test over the full 64-bit range."""
    _check_u64(k, "k")
    if k < 2:
        return False
    for p in _MR_BASES:
        if k % p == 0:
            return k == p
    d = k - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, k)
        if x == 1 or x == k - 1:
            continue
        for _ in range(r - 1):
            x = x * x % k
            if x == k - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(primes_upto(_TRIAL_LIMIT))


def factorize(k: int) -> dict[int, int]:
    """Prime factorization {p: exponent} by trial division.

    Raises DomainError when the cofactor left after the trial pool is a
    composite that is not a prime square (two large prime factors, say).
    """
    _check_u64(k, "k")
    if k < 1:
        raise DomainError(f"cannot factor {k}; argument must be >= 1")
    factors: dict[int, int] = {}
    rest = k
    for p in _trial_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
    if rest > 1:
        if is_prime(rest):
            factors[rest] = factors.get(rest, 0) + 1
        else:
            root = isqrt(rest)
            if root * root == rest and is_prime(root):
                factors[root] = factors.get(root, 0) + 2
            else:
                raise DomainError(
                    f"{k} has a composite cofactor {rest} beyond trial-division reach"
                )
    return factors


def mobius(k: int) -> int:
    """Point Möbius value: 0 on a squared prime factor, else (-1)^(#primes)."""
    _check_u64(k, "k")
    if k < 1:
        raise DomainError("mobius is defined for k >= 1")
    if k == 1:
        return 1
    sign = 1
    rest = k
    for p in _trial_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            rest //= p
            if rest % p == 0:
                return 0
            sign = -sign
    if rest > 1:
        if is_prime(rest):
            sign = -sign
        else:
            root = isqrt(rest)
            if root * root == rest and is_prime(root):
                return 0
            raise DomainError(
                f"{k} has a composite cofactor {rest} beyond trial-division reach"
            )
    return sign


def mobius_sieve(limit: int) -> list[int]:
    """Möbius values for 0..limit via a linear sieve (index 0 is a placeholder).

    The sieve route exists to cross-validate the factorization route and to
    make range scans cheap.
    """
    _check_u64(limit, "limit")
    if limit > _SIEVE_LIMIT:
        raise DomainError(f"sieve bound {limit} exceeds the {_SIEVE_LIMIT} guard")
    mu = [0] * (limit + 1)
    if limit >= 1:
        mu[1] = 1
    primes: list[int] = []
    is_comp = bytearray(limit + 1)
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def _eratosthenes(x: int) -> bytearray:
    _check_u64(x, "x")
    if x > _SIEVE_LIMIT:
        raise DomainError(f"sieve bound {x} exceeds the {_SIEVE_LIMIT} guard")
    flags = bytearray([1]) * (x + 1)
    for i in range(min(x, 1) + 1):
        flags[i] = 0
    for p in range(2, isqrt(x) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, x + 1, p)))
    return flags


def primes_upto(x: int) -> list[int]:
    """All primes p with 2 <= p <= x, ascending."""
    flags = _eratosthenes(x)
    return [i for i in range(2, x + 1) if flags[i]]


def prime_pi(x: int) -> int:
    """Number of primes <= x."""
    return sum(_eratosthenes(x))


def is_integer_ratio(s: int, w: int) -> bool:
    """True iff w divides s exactly. w = 0 is a domain error."""
    _check_u64(s, "s")
    _check_u64(w, "w")
    if w == 0:
        raise DomainError("division witness w must be >= 1")
    return s % w == 0


def recurrence_orbit(p: int, q: int, bound: int) -> list[int]:
    """Members of the affine orbit x_0 = 1, x_{k+1} = p*x_k + q that are <= bound.

    Ascending, starting at x_0 = 1. The p = 1, q = 0 fixed point yields [1].
    An orbit value escaping 64 bits while still below the bound is a domain
    error (unreachable for 64-bit bounds, kept as a guard).
    """
    _check_u64(p, "p")
    _check_u64(q, "q")
    _check_u64(bound, "bound")
    if p < 1:
        raise DomainError("orbit multiplier p must be >= 1")
    if bound < 1:
        raise DomainError("orbit bound must be >= 1")
    orbit = [1]
    x = 1
    while True:
        nxt = p * x + q
        if nxt <= x:  # stationary orbit (p = 1, q = 0)
            break
        if nxt > U64_MAX and nxt <= bound:
            raise DomainError("orbit overflows 64 bits before reaching the bound")
        if nxt > bound:
            break
        orbit.append(nxt)
        x = nxt
    return orbit


def squarefree_support(n: int) -> list[int]:
    """The first n integers k >= 1 with mobius(k) != 0, ascending."""
    _check_u64(n, "n")
    if n < 1:
        raise DomainError("support size must be >= 1")
    # Squarefree density is ~0.61, so 2n overshoots; grow if it ever does not.
    limit = max(16, 2 * n)
    while True:
        mu = mobius_sieve(limit)
        out = [k for k in range(1, limit + 1) if mu[k] != 0]
        if len(out) >= n:
            return out[:n]
        limit *= 2
