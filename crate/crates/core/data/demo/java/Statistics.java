public class Statistics {
    static double mean(int[] values) {
        int total = 0;
        for (int i = 0; i < values.length; i++) {
            total = total + values[i];
        }
        return (double) total / values.length;
    }

    static double variance(int[] values) {
        double m = mean(values);
        double total = 0;
        for (int i = 0; i < values.length; i++) {
            total = total + (values[i] - m) * (values[i] - m);
        }
        return total / values.length;
    }

    static int mode(int[] values) {
        int[] counts = new int[20];
        for (int i = 0; i < values.length; i++) {
            counts[values[i]]++;
        }
        int best = 0;
        for (int v = 1; v < counts.length; v++) {
            if (counts[v] > counts[best]) {
                best = v;
            }
        }
        return best;
    }

    static int[] histogram(int[] values, int buckets, int high) {
        int[] bins = new int[buckets];
        int width = high / buckets;
        for (int i = 0; i < values.length; i++) {
            int index = values[i] / width;
            if (index >= buckets) {
                index = buckets - 1;
            }
            bins[index]++;
        }
        return bins;
    }

    static int[] data(int size) {
        int[] out = new int[size];
        int state = 7;
        for (int i = 0; i < size; i++) {
            state = (state * 31 + 11) % 97;
            out[i] = state % 20;
        }
        return out;
    }

    public static void main(String[] args) {
        int[] values = data(40);
        System.out.println("mean " + mean(values) + " variance " + variance(values) + " mode " + mode(values));
        int[] bins = histogram(values, 5, 20);
        for (int i = 0; i < bins.length; i++) {
            System.out.println("bucket " + i + " " + "#".repeat(bins[i]));
        }
    }
}
