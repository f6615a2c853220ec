public class RunLength {
    static String encode(String text) {
        StringBuilder out = new StringBuilder();
        int count = 1;
        for (int i = 1; i <= text.length(); i++) {
            if (i < text.length() && text.charAt(i) == text.charAt(i - 1)) {
                count++;
            } else {
                if (count > 1) {
                    out.append(count);
                }
                out.append(text.charAt(i - 1));
                count = 1;
            }
        }
        return out.toString();
    }

    static String decode(String encoded) {
        StringBuilder out = new StringBuilder();
        int number = 0;
        for (int i = 0; i < encoded.length(); i++) {
            char ch = encoded.charAt(i);
            if (ch >= '0' && ch <= '9') {
                number = number * 10 + (ch - '0');
            } else {
                int times = number == 0 ? 1 : number;
                for (int k = 0; k < times; k++) {
                    out.append(ch);
                }
                number = 0;
            }
        }
        return out.toString();
    }

    static int longestRun(String text) {
        int best = 0;
        int current = 0;
        for (int i = 0; i < text.length(); i++) {
            if (i > 0 && text.charAt(i) == text.charAt(i - 1)) {
                current++;
            } else {
                current = 1;
            }
            if (current > best) {
                best = current;
            }
        }
        return best;
    }

    static int ratio(String text) {
        if (text.isEmpty()) {
            return 0;
        }
        return encode(text).length() * 100 / text.length();
    }

    public static void main(String[] args) {
        String[] samples = {"aaabccdddd", "abc", "zzzzzzzzzz", "aabbaabb", "mississippi", "wwwwaaadexxxxxx"};
        for (int i = 0; i < samples.length; i++) {
            String encoded = encode(samples[i]);
            System.out.println(samples[i] + " -> " + encoded + " " + decode(encoded).equals(samples[i])
                + " ratio " + ratio(samples[i]) + " longest " + longestRun(samples[i]));
        }
    }
}
