def knapsack(weights, values, capacity):
    n = len(weights)
    table = [[0] * (capacity + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for c in range(capacity + 1):
            table[i][c] = table[i - 1][c]
            if weights[i - 1] <= c:
                candidate = table[i - 1][c - weights[i - 1]] + values[i - 1]
                if candidate > table[i][c]:
                    table[i][c] = candidate
    return table


def chosen_items(table, weights, capacity):
    chosen = []
    c = capacity
    for i in range(len(weights), 0, -1):
        if table[i][c] != table[i - 1][c]:
            chosen.append(i - 1)
            c = c - weights[i - 1]
    chosen.reverse()
    return chosen


def total_weight(items, weights):
    total = 0
    for i in items:
        total = total + weights[i]
    return total


def greedy(weights, values, capacity):
    order = sorted(range(len(weights)), key=lambda i: values[i] / weights[i], reverse=True)
    used = 0
    gained = 0
    for i in order:
        if used + weights[i] <= capacity:
            used = used + weights[i]
            gained = gained + values[i]
    return gained


def report(weights, values, capacity):
    table = knapsack(weights, values, capacity)
    best = table[len(weights)][capacity]
    items = chosen_items(table, weights, capacity)
    print("capacity", capacity, "best", best, "items", items)
    print("  weight used", total_weight(items, weights), "greedy", greedy(weights, values, capacity))
    return best


def main():
    weights = [3, 4, 5, 9, 4, 2, 7]
    values = [3, 4, 4, 10, 4, 1, 8]
    results = []
    for capacity in range(0, 25, 3):
        results.append(report(weights, values, capacity))
    print("all:", results)
    print("sum:", sum(results))


main()
