public class NQueens {
    static boolean isSafe(int[][] board, int row, int col, int n) {
        for (int i = 0; i < col; i++) {
            if (board[row][i] == 1) {
                return false;
            }
        }
        for (int i = row, j = col; i >= 0 && j >= 0; i--, j--) {
            if (board[i][j] == 1) {
                return false;
            }
        }
        for (int i = row, j = col; i < n && j >= 0; i++, j--) {
            if (board[i][j] == 1) {
                return false;
            }
        }
        return true;
    }

    static int solve(int[][] board, int col, int n) {
        if (col >= n) {
            return 1;
        }
        int count = 0;
        for (int row = 0; row < n; row++) {
            if (isSafe(board, row, col, n)) {
                board[row][col] = 1;
                count = count + solve(board, col + 1, n);
                board[row][col] = 0;
            }
        }
        return count;
    }

    static String render(int[] queens) {
        StringBuilder sb = new StringBuilder();
        for (int r = 0; r < queens.length; r++) {
            for (int c = 0; c < queens.length; c++) {
                sb.append(queens[r] == c ? "Q " : ". ");
            }
            sb.append('\n');
        }
        return sb.toString();
    }

    static int countSolutions(int n) {
        int[][] board = new int[n][n];
        return solve(board, 0, n);
    }

    public static void main(String[] args) {
        int total = 0;
        for (int n = 1; n <= 8; n++) {
            int found = countSolutions(n);
            total = total + found;
            System.out.println("n = " + n + " solutions = " + found);
        }
        System.out.println("total = " + total);
        System.out.print(render(new int[] {1, 3, 0, 2}));
    }
}
