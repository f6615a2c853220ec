public class CaesarCipher {
    static char shift(char ch, int amount) {
        if (ch >= 'a' && ch <= 'z') {
            return (char) ((ch - 'a' + amount % 26 + 26) % 26 + 'a');
        }
        if (ch >= 'A' && ch <= 'Z') {
            return (char) ((ch - 'A' + amount % 26 + 26) % 26 + 'A');
        }
        return ch;
    }

    static String encrypt(String text, int amount) {
        StringBuilder out = new StringBuilder();
        for (int i = 0; i < text.length(); i++) {
            out.append(shift(text.charAt(i), amount));
        }
        return out.toString();
    }

    static String decrypt(String text, int amount) {
        return encrypt(text, 26 - amount % 26);
    }

    static int[] letterCounts(String text) {
        int[] counts = new int[26];
        String lower = text.toLowerCase();
        for (int i = 0; i < lower.length(); i++) {
            char ch = lower.charAt(i);
            if (ch >= 'a' && ch <= 'z') {
                counts[ch - 'a']++;
            }
        }
        return counts;
    }

    static int guessShift(String text) {
        int[] counts = letterCounts(text);
        int best = 0;
        for (int i = 1; i < 26; i++) {
            if (counts[i] > counts[best]) {
                best = i;
            }
        }
        return (best - 4 + 26) % 26;
    }

    static String vigenere(String text, String key, int sign) {
        StringBuilder out = new StringBuilder();
        int k = 0;
        for (int i = 0; i < text.length(); i++) {
            char ch = text.charAt(i);
            if (Character.isLetter(ch)) {
                out.append(shift(ch, sign * (key.charAt(k % key.length()) - 'a')));
                k++;
            } else {
                out.append(ch);
            }
        }
        return out.toString();
    }

    public static void main(String[] args) {
        String message = "Meet me near the old tree at seven, bring the secret letters.";
        for (int s = 0; s < 27; s += 3) {
            String hidden = encrypt(message, s);
            System.out.println(s + " " + hidden + " " + decrypt(hidden, s).equals(message) + " " + guessShift(hidden));
        }
        System.out.println(vigenere(vigenere(message, "lemon", 1), "lemon", -1));
    }
}
