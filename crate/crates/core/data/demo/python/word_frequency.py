TEXT = """the quick brown fox jumps over the lazy dog
the dog barks and the fox runs into the forest
a quick brown dog chases a lazy fox over the hill"""


def tokenize(text):
    words = []
    current = ""
    for ch in text:
        if ch.isalpha():
            current = current + ch.lower()
        else:
            if len(current) > 0:
                words.append(current)
            current = ""
    if len(current) > 0:
        words.append(current)
    return words


def frequencies(words):
    counts = {}
    for w in words:
        counts[w] = counts.get(w, 0) + 1
    return counts


def top_words(counts, limit):
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:limit]


def bigrams(words):
    pairs = {}
    for i in range(len(words) - 1):
        key = words[i] + " " + words[i + 1]
        pairs[key] = pairs.get(key, 0) + 1
    return pairs


def average_length(words):
    if len(words) == 0:
        return 0
    total = 0
    for w in words:
        total = total + len(w)
    return round(total / len(words), 3)


def main():
    words = tokenize(TEXT)
    print("words:", len(words), "distinct:", len(frequencies(words)))
    for word, count in top_words(frequencies(words), 8):
        print(word.ljust(8), "*" * count, count)
    for pair, count in top_words(bigrams(words), 5):
        print("bigram", pair, count)
    print("average length:", average_length(words))
    lines = TEXT.split("\n")
    for i in range(len(lines)):
        print("line", i + 1, "has", len(tokenize(lines[i])), "words")
    longest = ""
    for w in words:
        if len(w) > len(longest):
            longest = w
    print("longest word:", longest)


main()
