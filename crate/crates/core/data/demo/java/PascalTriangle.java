public class PascalTriangle {
    static long[][] build(int rows) {
        long[][] triangle = new long[rows][];
        for (int r = 0; r < rows; r++) {
            triangle[r] = new long[r + 1];
            triangle[r][0] = 1;
            triangle[r][r] = 1;
            for (int c = 1; c < r; c++) {
                triangle[r][c] = triangle[r - 1][c - 1] + triangle[r - 1][c];
            }
        }
        return triangle;
    }

    static long binomial(int n, int k) {
        if (k < 0 || k > n) {
            return 0;
        }
        long result = 1;
        for (int i = 1; i <= k; i++) {
            result = result * (n - i + 1) / i;
        }
        return result;
    }

    static long rowSum(long[] row) {
        long total = 0;
        for (int i = 0; i < row.length; i++) {
            total = total + row[i];
        }
        return total;
    }

    static int oddCount(long[] row) {
        int count = 0;
        for (int i = 0; i < row.length; i++) {
            if (row[i] % 2 == 1) {
                count++;
            }
        }
        return count;
    }

    static String format(long[] row) {
        StringBuilder sb = new StringBuilder();
        for (int i = 0; i < row.length; i++) {
            sb.append(row[i]).append(' ');
        }
        return sb.toString().trim();
    }

    public static void main(String[] args) {
        long[][] triangle = build(12);
        for (int r = 0; r < triangle.length; r++) {
            System.out.println(format(triangle[r]) + " | sum " + rowSum(triangle[r]) + " odd " + oddCount(triangle[r]));
        }
        for (int n = 0; n < 12; n++) {
            System.out.println("C(" + n + ", " + n / 2 + ") = " + binomial(n, n / 2));
        }
    }
}
