def is_palindrome(text):
    cleaned = []
    for ch in text.lower():
        if ch.isalnum():
            cleaned.append(ch)
    left = 0
    right = len(cleaned) - 1
    while left < right:
        if cleaned[left] != cleaned[right]:
            return False
        left = left + 1
        right = right - 1
    return True


def longest_palindrome(text):
    best = ""
    for center in range(len(text)):
        for width in range(0, 2):
            low = center
            high = center + width
            while low >= 0 and high < len(text) and text[low] == text[high]:
                low = low - 1
                high = high + 1
            candidate = text[low + 1:high]
            if len(candidate) > len(best):
                best = candidate
    return best


def count_palindromic_substrings(text):
    count = 0
    for i in range(len(text)):
        for j in range(i + 1, len(text) + 1):
            piece = text[i:j]
            if piece == piece[::-1]:
                count = count + 1
    return count


def make_palindrome(text):
    for i in range(len(text)):
        suffix = text[i:]
        if suffix == suffix[::-1]:
            return text + text[:i][::-1]
    return text


def main():
    samples = ["racecar", "A man, a plan, a canal: Panama", "hello", "abba", "abcba", "xyz", "noon", ""]
    for s in samples:
        print(repr(s), "palindrome:", is_palindrome(s))
    words = ["babad", "cbbd", "forgeeksskeegfor", "abacdfgdcaba", "aaaa"]
    for w in words:
        print(w, "longest:", longest_palindrome(w), "count:", count_palindromic_substrings(w))
        print("  completed:", make_palindrome(w))
    numbers = []
    for n in range(90, 200):
        if is_palindrome(str(n)):
            numbers.append(n)
    print("palindromic numbers:", numbers)


main()
