def collatz_length(n):
    steps = 0
    while n != 1:
        if n % 2 == 0:
            n = n // 2
        else:
            n = 3 * n + 1
        steps = steps + 1
    return steps


def collatz_peak(n):
    peak = n
    while n != 1:
        if n % 2 == 0:
            n = n // 2
        else:
            n = 3 * n + 1
        if n > peak:
            peak = n
    return peak


def longest_below(limit):
    best = 1
    best_length = 0
    for n in range(1, limit):
        length = collatz_length(n)
        if length > best_length:
            best = n
            best_length = length
    return best, best_length


def digit_sum(n):
    total = 0
    while n > 0:
        total = total + n % 10
        n = n // 10
    return total


def sequence(n):
    out = [n]
    while n != 1 and len(out) < 30:
        if n % 2 == 0:
            n = n // 2
        else:
            n = 3 * n + 1
        out.append(n)
    return out


def main():
    for n in range(1, 21):
        print(n, "length", collatz_length(n), "peak", collatz_peak(n), "digits", digit_sum(collatz_peak(n)))
    print("longest below 100:", longest_below(100))
    print("longest below 300:", longest_below(300))
    print("sequence of 27:", sequence(27))
    print("sequence of 6:", sequence(6))


main()
