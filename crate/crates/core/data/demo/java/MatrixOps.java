public class MatrixOps {
    static int[][] identity(int n) {
        int[][] m = new int[n][n];
        for (int i = 0; i < n; i++) {
            m[i][i] = 1;
        }
        return m;
    }

    static int[][] multiply(int[][] a, int[][] b) {
        int rows = a.length;
        int cols = b[0].length;
        int[][] result = new int[rows][cols];
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                int total = 0;
                for (int k = 0; k < b.length; k++) {
                    total = total + a[i][k] * b[k][j];
                }
                result[i][j] = total;
            }
        }
        return result;
    }

    static int trace(int[][] m) {
        int total = 0;
        for (int i = 0; i < m.length; i++) {
            total = total + m[i][i];
        }
        return total;
    }

    static int[][] power(int[][] m, int exponent) {
        int[][] result = identity(m.length);
        for (int e = 0; e < exponent; e++) {
            result = multiply(result, m);
        }
        return result;
    }

    static int determinant3(int[][] m) {
        int a = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
        int b = m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]);
        int c = m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        return a - b + c;
    }

    static void show(String name, int[][] m) {
        System.out.println(name);
        for (int i = 0; i < m.length; i++) {
            System.out.println("  " + java.util.Arrays.toString(m[i]));
        }
    }

    public static void main(String[] args) {
        int[][] a = {{1, 2, 3}, {4, 5, 6}, {7, 8, 10}};
        int[][] b = {{2, 0, 1}, {1, 3, 0}, {0, 1, 4}};
        show("a*b", multiply(a, b));
        System.out.println("trace " + trace(a) + " det " + determinant3(a) + " " + determinant3(b));
        for (int e = 0; e < 4; e++) {
            show("b^" + e, power(b, e));
        }
    }
}
