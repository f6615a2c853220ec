public class BinarySearch {
    static int search(int[] items, int target) {
        int low = 0;
        int high = items.length - 1;
        while (low <= high) {
            int mid = (low + high) / 2;
            if (items[mid] == target) {
                return mid;
            }
            if (items[mid] < target) {
                low = mid + 1;
            } else {
                high = mid - 1;
            }
        }
        return -1;
    }

    static int lowerBound(int[] items, int target) {
        int low = 0;
        int high = items.length;
        while (low < high) {
            int mid = (low + high) / 2;
            if (items[mid] < target) {
                low = mid + 1;
            } else {
                high = mid;
            }
        }
        return low;
    }

    static int linearSearch(int[] items, int target) {
        for (int i = 0; i < items.length; i++) {
            if (items[i] == target) {
                return i;
            }
        }
        return -1;
    }

    static int countInRange(int[] items, int low, int high) {
        int count = 0;
        for (int i = 0; i < items.length; i++) {
            if (items[i] >= low && items[i] <= high) {
                count++;
            }
        }
        return count;
    }

    static int[] build(int size) {
        int[] items = new int[size];
        for (int i = 0; i < size; i++) {
            items[i] = i * 3 + 1;
        }
        return items;
    }

    public static void main(String[] args) {
        int[] items = build(25);
        for (int target = 0; target < 80; target += 7) {
            System.out.println(target + ": " + search(items, target) + " " + linearSearch(items, target)
                + " " + lowerBound(items, target));
        }
        System.out.println("in range: " + countInRange(items, 10, 40));
    }
}
