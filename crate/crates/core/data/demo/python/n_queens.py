def is_safe(board, row, col, n):
    # Check this row on the left side.
    for i in range(col):
        if board[row][i] == 1:
            return False
    # Check the upper diagonal on the left side.
    for i, j in zip(range(row, -1, -1), range(col, -1, -1)):
        if board[i][j] == 1:
            return False
    # Check the lower diagonal on the left side.
    for i, j in zip(range(row, n), range(col, -1, -1)):
        if board[i][j] == 1:
            return False
    return True


def solve(board, col, n, solutions):
    if col >= n:
        solutions.append([row[:] for row in board])
        return True
    found = False
    for row in range(n):
        if is_safe(board, row, col, n):
            board[row][col] = 1
            if solve(board, col + 1, n, solutions):
                found = True
            board[row][col] = 0
    return found


def render(board):
    lines = []
    for row in board:
        cells = []
        for cell in row:
            if cell == 1:
                cells.append("Q")
            else:
                cells.append(".")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def count_solutions(n):
    board = [[0 for _ in range(n)] for _ in range(n)]
    solutions = []
    solve(board, 0, n, solutions)
    return solutions


def main():
    for n in range(1, 7):
        solutions = count_solutions(n)
        print("n =", n, "solutions =", len(solutions))
        if len(solutions) > 0 and n >= 4:
            print(render(solutions[0]))
            print("-" * (2 * n - 1))
    total = 0
    for n in range(4, 7):
        total = total + len(count_solutions(n))
    print("total for 4..6:", total)


main()
