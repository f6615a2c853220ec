import java.util.Arrays;

public class BubbleSort {
    static int bubbleSort(int[] items) {
        int swaps = 0;
        for (int i = 0; i < items.length; i++) {
            boolean changed = false;
            for (int j = 0; j < items.length - i - 1; j++) {
                if (items[j] > items[j + 1]) {
                    int tmp = items[j];
                    items[j] = items[j + 1];
                    items[j + 1] = tmp;
                    swaps++;
                    changed = true;
                }
            }
            if (!changed) {
                break;
            }
        }
        return swaps;
    }

    static void selectionSort(int[] items) {
        for (int i = 0; i < items.length - 1; i++) {
            int smallest = i;
            for (int j = i + 1; j < items.length; j++) {
                if (items[j] < items[smallest]) {
                    smallest = j;
                }
            }
            int tmp = items[i];
            items[i] = items[smallest];
            items[smallest] = tmp;
        }
    }

    static boolean isSorted(int[] items) {
        for (int i = 0; i < items.length - 1; i++) {
            if (items[i] > items[i + 1]) {
                return false;
            }
        }
        return true;
    }

    static int[] makeData(int seed, int size) {
        int[] data = new int[size];
        long state = seed;
        for (int i = 0; i < size; i++) {
            state = (state * 1103515245L + 12345L) % 2147483648L;
            data[i] = (int) (state % 100);
        }
        return data;
    }

    public static void main(String[] args) {
        for (int seed = 1; seed <= 5; seed++) {
            int[] data = makeData(seed, 12);
            int[] copy = data.clone();
            int swaps = bubbleSort(data);
            selectionSort(copy);
            System.out.println(Arrays.toString(data) + " swaps=" + swaps);
            System.out.println(Arrays.toString(copy) + " sorted=" + isSorted(copy));
        }
    }
}
