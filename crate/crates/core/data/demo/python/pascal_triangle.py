def pascal(rows):
    triangle = []
    for r in range(rows):
        row = [1] * (r + 1)
        for c in range(1, r):
            row[c] = triangle[r - 1][c - 1] + triangle[r - 1][c]
        triangle.append(row)
    return triangle


def binomial(n, k):
    if k < 0 or k > n:
        return 0
    result = 1
    for i in range(1, k + 1):
        result = result * (n - i + 1) // i
    return result


def row_sums(triangle):
    sums = []
    for row in triangle:
        total = 0
        for value in row:
            total = total + value
        sums.append(total)
    return sums


def odd_count(row):
    count = 0
    for value in row:
        if value % 2 == 1:
            count = count + 1
    return count


def format_row(row, width):
    text = " ".join(str(v) for v in row)
    padding = (width - len(text)) // 2
    return " " * padding + text


def main():
    triangle = pascal(11)
    width = len(" ".join(str(v) for v in triangle[-1]))
    for row in triangle:
        print(format_row(row, width))
    print("row sums:", row_sums(triangle))
    for n in range(0, 11):
        for k in range(0, n + 1):
            if binomial(n, k) != triangle[n][k]:
                print("mismatch", n, k)
    print("odd counts:", [odd_count(row) for row in triangle])
    print("C(20, 10) =", binomial(20, 10), "C(30, 3) =", binomial(30, 3))
    diagonal = []
    for n in range(2, 11):
        diagonal.append(triangle[n][2])
    print("triangular numbers:", diagonal)
    print("middle of row 10:", triangle[10][5])


main()
