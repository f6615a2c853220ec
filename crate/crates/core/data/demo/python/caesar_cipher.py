def shift_char(ch, shift):
    if "a" <= ch <= "z":
        return chr((ord(ch) - ord("a") + shift) % 26 + ord("a"))
    if "A" <= ch <= "Z":
        return chr((ord(ch) - ord("A") + shift) % 26 + ord("A"))
    return ch


def encrypt(text, shift):
    out = []
    for ch in text:
        out.append(shift_char(ch, shift))
    return "".join(out)


def decrypt(text, shift):
    return encrypt(text, 26 - shift % 26)


def letter_counts(text):
    counts = [0] * 26
    for ch in text.lower():
        if "a" <= ch <= "z":
            counts[ord(ch) - ord("a")] = counts[ord(ch) - ord("a")] + 1
    return counts


def guess_shift(text):
    counts = letter_counts(text)
    best = 0
    for i in range(1, 26):
        if counts[i] > counts[best]:
            best = i
    return (best - 4) % 26


def vigenere(text, key, sign):
    out = []
    k = 0
    for ch in text:
        if ch.isalpha():
            shift = ord(key[k % len(key)]) - ord("a")
            out.append(shift_char(ch, sign * shift))
            k = k + 1
        else:
            out.append(ch)
    return "".join(out)


def main():
    message = "Meet me near the old tree at seven, bring the secret letters."
    for shift in range(0, 27, 3):
        hidden = encrypt(message, shift)
        print(shift, hidden)
        print("   back:", decrypt(hidden, shift) == message, "guess:", guess_shift(hidden))
    locked = vigenere(message, "lemon", 1)
    print("vigenere:", locked)
    print("unlocked:", vigenere(locked, "lemon", -1))
    print("counts:", letter_counts(message))
    rotated = message
    for step in range(1, 4):
        rotated = encrypt(rotated, step)
        print("rotated", step, rotated[:20])


main()
