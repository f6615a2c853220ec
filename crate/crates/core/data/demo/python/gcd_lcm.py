def gcd(a, b):
    while b != 0:
        a, b = b, a % b
    return a


def lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return a * b // gcd(a, b)


def extended_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = extended_gcd(b, a % b)
    return g, y, x - (a // b) * y


def mod_inverse(a, m):
    g, x, _ = extended_gcd(a, m)
    if g != 1:
        return None
    return x % m


def coprime_count(n):
    count = 0
    for k in range(1, n + 1):
        if gcd(k, n) == 1:
            count = count + 1
    return count


def lcm_of_range(n):
    result = 1
    for k in range(1, n + 1):
        result = lcm(result, k)
    return result


def divisors(n):
    found = []
    for d in range(1, n + 1):
        if n % d == 0:
            found.append(d)
    return found


def main():
    pairs = [(12, 18), (17, 5), (100, 75), (0, 9), (21, 14), (81, 27)]
    for a, b in pairs:
        print("gcd", a, b, "=", gcd(a, b), "lcm =", lcm(a, b))
        print("  extended:", extended_gcd(a, b))
    for a in range(1, 12):
        print("inverse of", a, "mod 13:", mod_inverse(a, 13), "mod 12:", mod_inverse(a, 12))
    for n in range(1, 16):
        print("phi", n, "=", coprime_count(n), "divisors", divisors(n))
    print("lcm 1..15:", lcm_of_range(15))
    checks = 0
    for a in range(1, 30):
        if gcd(a, 30) * lcm(a, 30) != a * 30:
            print("identity fails for", a)
        checks = checks + 1
    print("identity checked", checks, "times")


main()
