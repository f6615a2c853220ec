#![allow(dead_code)]

use flbench_core::corpus::SeedProgram;
use flbench_core::language::SubjectLanguage;

/// The N-Queen running example with the diagonal loop bound at line 13
/// intact; `faulty_nqueens` shortens that bound by one.
pub const NQUEENS: &str = "\
def solveNQueens(n):
    def is_safe(board, row, col):
        for i in range(col):
            if board[row][i] == 1:
                return False

        for i, j in zip(range(row, -1, -1),
                        range(col, -1, -1)):
            if board[i][j] == 1:
                return False

        # Check the lower-left diagonal
        for i, j in zip(range(row, n, 1),
                        range(col, -1, -1)):
            if board[i][j] == 1:
                return False
        return True

    def solveQueen(board, col, result):
        if col == n:
            result.append([''.join('Q' if c else '.' for c in r) for r in board])
            return
        for i in range(n):
            if is_safe(board, i, col):
                board[i][col] = 1
                solveQueen(board, col + 1, result)
                board[i][col] = 0

    result = []
    board = [[0] * n for _ in range(n)]
    solveQueen(board, 0, result)
    return result


n = 4
solutions = solveNQueens(n)
print(len(solutions))
for s in solutions:
    print(s)
";

pub const NQUEENS_SPEC: &str = "solve the N-Queen problem. Given an input N, it should return all valid arrangements of N queens on an N x N board such that no two queens attack each other";

pub fn faulty_nqueens() -> String {
    NQUEENS.replacen("range(row, n, 1)", "range(row, n-1, 1)", 1)
}

pub fn nqueens_seed() -> SeedProgram {
    SeedProgram::new("py-nqueens-example", SubjectLanguage::Python, NQUEENS_SPEC, NQUEENS)
}

/// 1-based line of the single line of `text` containing `needle`.
pub fn unique_line(text: &str, needle: &str) -> Option<usize> {
    let mut hits = text.lines().enumerate().filter(|(_, l)| l.contains(needle));
    let first = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    Some(first.0 + 1)
}

pub fn python3_available() -> bool {
    std::process::Command::new("python3")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}
