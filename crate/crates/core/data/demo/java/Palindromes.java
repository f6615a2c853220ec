public class Palindromes {
    static boolean isPalindrome(String text) {
        int left = 0;
        int right = text.length() - 1;
        while (left < right) {
            if (text.charAt(left) != text.charAt(right)) {
                return false;
            }
            left++;
            right--;
        }
        return true;
    }

    static String longest(String text) {
        String best = "";
        for (int center = 0; center < text.length(); center++) {
            for (int width = 0; width < 2; width++) {
                int low = center;
                int high = center + width;
                while (low >= 0 && high < text.length() && text.charAt(low) == text.charAt(high)) {
                    low--;
                    high++;
                }
                if (high - low - 1 > best.length()) {
                    best = text.substring(low + 1, high);
                }
            }
        }
        return best;
    }

    static int countSubstrings(String text) {
        int count = 0;
        for (int i = 0; i < text.length(); i++) {
            for (int j = i + 1; j <= text.length(); j++) {
                if (isPalindrome(text.substring(i, j))) {
                    count++;
                }
            }
        }
        return count;
    }

    static int countNumbers(int from, int to) {
        int count = 0;
        for (int n = from; n < to; n++) {
            if (isPalindrome(Integer.toString(n))) {
                count++;
            }
        }
        return count;
    }

    public static void main(String[] args) {
        String[] words = {"babad", "cbbd", "racecar", "abacdfgdcaba", "aaaa", "xyz"};
        for (int i = 0; i < words.length; i++) {
            System.out.println(words[i] + " " + isPalindrome(words[i]) + " " + longest(words[i]) + " "
                + countSubstrings(words[i]));
        }
        System.out.println("numbers " + countNumbers(10, 1000));
    }
}
