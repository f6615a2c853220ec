public class Collatz {
    static int length(long n) {
        int steps = 0;
        while (n != 1) {
            if (n % 2 == 0) {
                n = n / 2;
            } else {
                n = 3 * n + 1;
            }
            steps++;
        }
        return steps;
    }

    static long peak(long n) {
        long best = n;
        while (n != 1) {
            if (n % 2 == 0) {
                n = n / 2;
            } else {
                n = 3 * n + 1;
            }
            if (n > best) {
                best = n;
            }
        }
        return best;
    }

    static int longestBelow(int limit) {
        int best = 1;
        int bestLength = 0;
        for (int n = 1; n < limit; n++) {
            int current = length(n);
            if (current > bestLength) {
                best = n;
                bestLength = current;
            }
        }
        return best;
    }

    static int digitSum(long n) {
        int total = 0;
        while (n > 0) {
            total = total + (int) (n % 10);
            n = n / 10;
        }
        return total;
    }

    static int evenSteps(long n) {
        int count = 0;
        for (int i = 0; i < 200 && n != 1; i++) {
            if (n % 2 == 0) {
                count++;
                n = n / 2;
            } else {
                n = 3 * n + 1;
            }
        }
        return count;
    }

    public static void main(String[] args) {
        for (int n = 1; n <= 20; n++) {
            System.out.println(n + " length " + length(n) + " peak " + peak(n) + " digits " + digitSum(peak(n))
                + " even " + evenSteps(n));
        }
        System.out.println("longest below 100: " + longestBelow(100));
    }
}
