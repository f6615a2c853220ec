def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def multiply(a, b):
    rows = len(a)
    cols = len(b[0])
    inner = len(b)
    result = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            total = 0
            for k in range(inner):
                total = total + a[i][k] * b[k][j]
            result[i][j] = total
    return result


def transpose(m):
    return [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]


def trace(m):
    total = 0
    for i in range(len(m)):
        total = total + m[i][i]
    return total


def power(m, exponent):
    result = identity(len(m))
    for _ in range(exponent):
        result = multiply(result, m)
    return result


def determinant3(m):
    a = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    b = m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
    c = m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    return a - b + c


def show(name, m):
    print(name)
    for row in m:
        print("  ", row)


def main():
    a = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    b = [[2, 0, 1], [1, 3, 0], [0, 1, 4]]
    show("a", a)
    show("b", b)
    show("a*b", multiply(a, b))
    show("b^T", transpose(b))
    print("trace a:", trace(a), "trace b:", trace(b))
    for e in range(0, 4):
        show("b^" + str(e), power(b, e))
    print("det a:", determinant3(a), "det b:", determinant3(b))
    fib = [[1, 1], [1, 0]]
    for e in range(1, 12):
        print("fib", e, power(fib, e)[0][1])


main()
