import java.util.ArrayList;
import java.util.List;

public class PrimeSieve {
    static boolean[] sieve(int limit) {
        boolean[] composite = new boolean[limit + 1];
        for (int p = 2; p * p <= limit; p++) {
            if (!composite[p]) {
                for (int m = p * p; m <= limit; m += p) {
                    composite[m] = true;
                }
            }
        }
        return composite;
    }

    static List<Integer> primesUpTo(int limit) {
        boolean[] composite = sieve(limit);
        List<Integer> primes = new ArrayList<>();
        for (int i = 2; i <= limit; i++) {
            if (!composite[i]) {
                primes.add(i);
            }
        }
        return primes;
    }

    static boolean isPrime(int n) {
        if (n < 2) {
            return false;
        }
        for (int d = 2; d * d <= n; d++) {
            if (n % d == 0) {
                return false;
            }
        }
        return true;
    }

    static int countTwins(List<Integer> primes) {
        int twins = 0;
        for (int i = 0; i < primes.size() - 1; i++) {
            if (primes.get(i + 1) - primes.get(i) == 2) {
                twins++;
            }
        }
        return twins;
    }

    static int largestGap(List<Integer> primes) {
        int best = 0;
        for (int i = 1; i < primes.size(); i++) {
            int gap = primes.get(i) - primes.get(i - 1);
            if (gap > best) {
                best = gap;
            }
        }
        return best;
    }

    public static void main(String[] args) {
        List<Integer> primes = primesUpTo(300);
        System.out.println("primes: " + primes);
        System.out.println("count: " + primes.size() + " twins: " + countTwins(primes));
        System.out.println("largest gap: " + largestGap(primes));
        for (int n = 0; n < 40; n++) {
            System.out.println(n + " prime? " + isPrime(n));
        }
    }
}
