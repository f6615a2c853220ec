def binary_search(items, target):
    low = 0
    high = len(items) - 1
    steps = 0
    while low <= high:
        steps = steps + 1
        mid = (low + high) // 2
        if items[mid] == target:
            return mid, steps
        if items[mid] < target:
            low = mid + 1
        else:
            high = mid - 1
    return -1, steps


def lower_bound(items, target):
    low = 0
    high = len(items)
    while low < high:
        mid = (low + high) // 2
        if items[mid] < target:
            low = mid + 1
        else:
            high = mid
    return low


def linear_search(items, target):
    for i in range(len(items)):
        if items[i] == target:
            return i
    return -1


def count_in_range(items, low, high):
    count = 0
    for i in range(len(items)):
        if items[i] >= low and items[i] <= high:
            count = count + 1
    return count


def build(size):
    items = []
    for i in range(size):
        items.append(i * 3 + 1)
    return items


def main():
    items = build(25)
    print("items:", items)
    for target in range(0, 80, 7):
        index, steps = binary_search(items, target)
        print("target", target, "index", index, "steps", steps)
        print("  linear", linear_search(items, target), "lower", lower_bound(items, target))
    for low in range(0, 60, 15):
        print("between", low, "and", low + 20, ":", count_in_range(items, low, low + 20))


main()
