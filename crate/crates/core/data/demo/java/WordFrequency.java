import java.util.Map;
import java.util.TreeMap;

public class WordFrequency {
    static final String TEXT = "the quick brown fox jumps over the lazy dog "
        + "the dog barks and the fox runs into the forest "
        + "a quick brown dog chases a lazy fox over the hill";

    static String[] tokenize(String text) {
        return text.trim().split("\\s+");
    }

    static Map<String, Integer> frequencies(String[] words) {
        Map<String, Integer> counts = new TreeMap<>();
        for (int i = 0; i < words.length; i++) {
            counts.put(words[i], counts.getOrDefault(words[i], 0) + 1);
        }
        return counts;
    }

    static String mostCommon(Map<String, Integer> counts) {
        String best = "";
        int bestCount = 0;
        for (Map.Entry<String, Integer> entry : counts.entrySet()) {
            if (entry.getValue() > bestCount) {
                best = entry.getKey();
                bestCount = entry.getValue();
            }
        }
        return best;
    }

    static int totalLength(String[] words) {
        int total = 0;
        for (int i = 0; i < words.length; i++) {
            total = total + words[i].length();
        }
        return total;
    }

    static int bigramCount(String[] words, String first, String second) {
        int count = 0;
        for (int i = 0; i < words.length - 1; i++) {
            if (words[i].equals(first) && words[i + 1].equals(second)) {
                count++;
            }
        }
        return count;
    }

    public static void main(String[] args) {
        String[] words = tokenize(TEXT);
        Map<String, Integer> counts = frequencies(words);
        System.out.println("words " + words.length + " distinct " + counts.size());
        System.out.println("counts " + counts);
        System.out.println("most common " + mostCommon(counts));
        System.out.println("average length x100 " + totalLength(words) * 100 / words.length);
        System.out.println("quick brown " + bigramCount(words, "quick", "brown"));
    }
}
