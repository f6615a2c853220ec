public class GcdLcm {
    static int gcd(int a, int b) {
        while (b != 0) {
            int t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static long lcm(long a, long b) {
        if (a == 0 || b == 0) {
            return 0;
        }
        return a / gcd((int) a, (int) b) * b;
    }

    static int coprimeCount(int n) {
        int count = 0;
        for (int k = 1; k <= n; k++) {
            if (gcd(k, n) == 1) {
                count++;
            }
        }
        return count;
    }

    static long lcmOfRange(int n) {
        long result = 1;
        for (int k = 1; k <= n; k++) {
            result = lcm(result, k);
        }
        return result;
    }

    static int divisorCount(int n) {
        int count = 0;
        for (int d = 1; d <= n; d++) {
            if (n % d == 0) {
                count++;
            }
        }
        return count;
    }

    static int modInverse(int a, int m) {
        for (int x = 1; x < m; x++) {
            if ((a * x) % m == 1) {
                return x;
            }
        }
        return -1;
    }

    public static void main(String[] args) {
        int[][] pairs = {{12, 18}, {17, 5}, {100, 75}, {0, 9}, {21, 14}};
        for (int i = 0; i < pairs.length; i++) {
            int a = pairs[i][0];
            int b = pairs[i][1];
            System.out.println("gcd " + gcd(a, b) + " lcm " + lcm(a, b));
        }
        for (int n = 1; n < 16; n++) {
            System.out.println("phi " + n + " = " + coprimeCount(n) + " divisors " + divisorCount(n)
                + " inverse " + modInverse(n, 17));
        }
        System.out.println("lcm 1..15 = " + lcmOfRange(15));
    }
}
