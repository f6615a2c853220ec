def sieve(limit):
    flags = [True] * (limit + 1)
    flags[0] = False
    if limit >= 1:
        flags[1] = False
    for p in range(2, limit + 1):
        if flags[p] and p * p <= limit:
            for multiple in range(p * p, limit + 1, p):
                flags[multiple] = False
    return [i for i in range(limit + 1) if flags[i]]


def is_prime(n):
    if n < 2:
        return False
    for d in range(2, n):
        if d * d > n:
            break
        if n % d == 0:
            return False
    return True


def twin_primes(primes):
    pairs = []
    for i in range(len(primes) - 1):
        if primes[i + 1] - primes[i] == 2:
            pairs.append((primes[i], primes[i + 1]))
    return pairs


def prime_gaps(primes):
    gaps = {}
    for i in range(1, len(primes)):
        gap = primes[i] - primes[i - 1]
        gaps[gap] = gaps.get(gap, 0) + 1
    return gaps


def goldbach(n, prime_set):
    for p in range(2, n // 2 + 1):
        if p in prime_set and (n - p) in prime_set:
            return (p, n - p)
    return None


def main():
    primes = sieve(200)
    print("primes up to 200:", primes)
    print("count:", len(primes))
    checked = 0
    for n in range(0, 60):
        if is_prime(n) != (n in primes):
            print("mismatch at", n)
        checked = checked + 1
    print("checked", checked, "numbers")
    print("twins:", twin_primes(primes))
    gaps = prime_gaps(primes)
    for gap in sorted(gaps):
        print("gap", gap, "occurs", gaps[gap], "times")
    prime_set = set(primes)
    for n in range(4, 41, 2):
        print(n, "=", goldbach(n, prime_set))


main()
