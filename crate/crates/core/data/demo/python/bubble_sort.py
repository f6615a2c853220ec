def bubble_sort(values):
    items = list(values)
    n = len(items)
    swaps = 0
    for i in range(n):
        changed = False
        for j in range(0, n - i - 1):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                swaps = swaps + 1
                changed = True
        if not changed:
            break
    return items, swaps


def insertion_sort(values):
    items = list(values)
    for i in range(1, len(items)):
        key = items[i]
        j = i - 1
        while j >= 0 and items[j] > key:
            items[j + 1] = items[j]
            j = j - 1
        items[j + 1] = key
    return items


def is_sorted(items):
    for i in range(len(items) - 1):
        if items[i] > items[i + 1]:
            return False
    return True


def make_data(seed, size):
    data = []
    state = seed
    for _ in range(size):
        state = (state * 1103515245 + 12345) % 2147483648
        data.append(state % 100)
    return data


def median(items):
    ordered = insertion_sort(items)
    mid = len(ordered) // 2
    if len(ordered) % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def main():
    for seed in range(1, 6):
        data = make_data(seed, 12)
        print("data:", data)
        ordered, swaps = bubble_sort(data)
        print("bubble:", ordered, "swaps:", swaps)
        print("insertion:", insertion_sort(data))
        print("sorted ok:", is_sorted(ordered), "median:", median(data))
    print("empty:", bubble_sort([]))


main()
