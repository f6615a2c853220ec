public class Knapsack {
    static int[][] table(int[] weights, int[] values, int capacity) {
        int n = weights.length;
        int[][] best = new int[n + 1][capacity + 1];
        for (int i = 1; i <= n; i++) {
            for (int c = 0; c <= capacity; c++) {
                best[i][c] = best[i - 1][c];
                if (weights[i - 1] <= c) {
                    int candidate = best[i - 1][c - weights[i - 1]] + values[i - 1];
                    if (candidate > best[i][c]) {
                        best[i][c] = candidate;
                    }
                }
            }
        }
        return best;
    }

    static int usedWeight(int[][] best, int[] weights, int capacity) {
        int c = capacity;
        int used = 0;
        for (int i = weights.length; i > 0; i--) {
            if (best[i][c] != best[i - 1][c]) {
                used = used + weights[i - 1];
                c = c - weights[i - 1];
            }
        }
        return used;
    }

    static int greedy(int[] weights, int[] values, int capacity) {
        int used = 0;
        int gained = 0;
        for (int i = 0; i < weights.length; i++) {
            if (used + weights[i] <= capacity && values[i] * 2 >= weights[i]) {
                used = used + weights[i];
                gained = gained + values[i];
            }
        }
        return gained;
    }

    static int report(int[] weights, int[] values, int capacity) {
        int[][] best = table(weights, values, capacity);
        int value = best[weights.length][capacity];
        System.out.println("capacity " + capacity + " best " + value + " weight "
            + usedWeight(best, weights, capacity) + " greedy " + greedy(weights, values, capacity));
        return value;
    }

    public static void main(String[] args) {
        int[] weights = {3, 4, 5, 9, 4, 2, 7};
        int[] values = {3, 4, 4, 10, 4, 1, 8};
        int sum = 0;
        for (int capacity = 0; capacity < 25; capacity += 3) {
            sum = sum + report(weights, values, capacity);
        }
        System.out.println("sum " + sum);
    }
}
