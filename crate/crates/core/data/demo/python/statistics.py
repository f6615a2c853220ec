def mean(values):
    total = 0
    for v in values:
        total = total + v
    return total / len(values)


def variance(values):
    m = mean(values)
    total = 0
    for v in values:
        total = total + (v - m) * (v - m)
    return total / len(values)


def mode(values):
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    best = None
    best_count = 0
    for v in sorted(counts):
        if counts[v] > best_count:
            best = v
            best_count = counts[v]
    return best


def histogram(values, buckets, low, high):
    width = (high - low) / buckets
    bins = [0] * buckets
    for v in values:
        index = int((v - low) / width)
        if index >= buckets:
            index = buckets - 1
        if index >= 0:
            bins[index] = bins[index] + 1
    return bins


def moving_average(values, window):
    result = []
    for i in range(len(values) - window + 1):
        result.append(round(mean(values[i:i + window]), 3))
    return result


def main():
    data = []
    state = 7
    for _ in range(40):
        state = (state * 31 + 11) % 97
        data.append(state % 20)
    print("data:", data)
    print("mean:", round(mean(data), 4), "variance:", round(variance(data), 4))
    print("mode:", mode(data), "min:", min(data), "max:", max(data))
    bins = histogram(data, 5, 0, 20)
    for i in range(len(bins)):
        print("bucket", i, "#" * bins[i])
    print("moving:", moving_average(data, 5))
    print("tie mode:", mode([3, 1, 3, 1, 2]))
    print("edge bins:", histogram([0, 5, 19, 20], 4, 0, 20))


main()
