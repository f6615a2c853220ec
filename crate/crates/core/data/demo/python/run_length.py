def encode(text):
    if len(text) == 0:
        return []
    runs = []
    current = text[0]
    count = 1
    for i in range(1, len(text)):
        if text[i] == current:
            count = count + 1
        else:
            runs.append((current, count))
            current = text[i]
            count = 1
    runs.append((current, count))
    return runs


def decode(runs):
    parts = []
    for ch, count in runs:
        parts.append(ch * count)
    return "".join(parts)


def to_string(runs):
    out = []
    for ch, count in runs:
        if count > 1:
            out.append(str(count) + ch)
        else:
            out.append(ch)
    return "".join(out)


def compression_ratio(text):
    encoded = to_string(encode(text))
    if len(text) == 0:
        return 0
    return round(len(encoded) * 100 / len(text), 2)


def longest_run(text):
    best = 0
    for ch, count in encode(text):
        if count > best:
            best = count
    return best


def main():
    samples = ["aaabccdddd", "abc", "", "zzzzzzzzzz", "aabbaabb", "mississippi", "wwwwaaadexxxxxx"]
    for s in samples:
        runs = encode(s)
        print(repr(s), "->", runs)
        print("  string:", to_string(runs), "roundtrip:", decode(runs) == s)
        print("  ratio:", compression_ratio(s), "longest:", longest_run(s))
    generated = ""
    for i in range(1, 8):
        generated = generated + chr(96 + i) * i
    print("generated:", generated, to_string(encode(generated)))


main()
