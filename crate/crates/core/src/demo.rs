//! The bundled 30-program demo corpus used by CI and the acceptance suite.

use crate::corpus::SeedProgram;
use crate::language::SubjectLanguage;

macro_rules! seeds {
    ($($id:literal, $lang:ident, $file:literal, $spec:literal;)*) => {
        &[$(($id, SubjectLanguage::$lang, $spec, include_str!(concat!("../data/demo/", $file))),)*]
    };
}

const DEMO: &[(&str, SubjectLanguage, &str, &str)] = seeds! {
    "py-n-queens", Python, "python/n_queens.py",
        "solve the N-Queen problem for boards of size 1 to 6, printing the number of solutions and the first board found";
    "py-sieve-primes", Python, "python/sieve_primes.py",
        "list the primes up to 200 with a sieve, cross-check trial division, and report twin primes, prime gaps and Goldbach pairs";
    "py-bubble-sort", Python, "python/bubble_sort.py",
        "sort pseudo-random lists with bubble sort and insertion sort, counting swaps and reporting the median";
    "py-binary-search", Python, "python/binary_search.py",
        "search an arithmetic sequence with binary, linear and lower-bound search and count values within ranges";
    "py-matrix-ops", Python, "python/matrix_ops.py",
        "multiply, transpose and exponentiate small integer matrices and compute traces, determinants and Fibonacci numbers";
    "py-knapsack", Python, "python/knapsack.py",
        "solve the 0/1 knapsack problem by dynamic programming for several capacities and compare with a greedy strategy";
    "py-gcd-lcm", Python, "python/gcd_lcm.py",
        "compute greatest common divisors, least common multiples, modular inverses, Euler's totient and divisor lists";
    "py-palindromes", Python, "python/palindromes.py",
        "detect palindromes, find the longest palindromic substring, count palindromic substrings and complete words into palindromes";
    "py-run-length", Python, "python/run_length.py",
        "run-length encode and decode strings and report compression ratios and the longest run";
    "py-pascal-triangle", Python, "python/pascal_triangle.py",
        "print Pascal's triangle with 11 rows, verify it against binomial coefficients and report row sums and odd entries";
    "py-bank-ledger", Python, "python/bank_ledger.py",
        "simulate bank accounts with deposits, withdrawals, transfers and yearly interest and print account statements";
    "py-statistics", Python, "python/statistics.py",
        "generate a pseudo-random data set and print its mean, variance, mode, histogram and moving average";
    "py-collatz", Python, "python/collatz.py",
        "compute Collatz sequence lengths and peaks and find the starting value with the longest sequence below a limit";
    "py-caesar-cipher", Python, "python/caesar_cipher.py",
        "encrypt and decrypt a message with Caesar shifts and a Vigenere key and guess the shift from letter frequencies";
    "py-word-frequency", Python, "python/word_frequency.py",
        "tokenize a short text and report word frequencies, common bigrams, average word length and words per line";
    "java-n-queens", Java, "java/NQueens.java",
        "count the solutions of the N-Queen problem for boards of size 1 to 8 and render one 4x4 solution";
    "java-prime-sieve", Java, "java/PrimeSieve.java",
        "list the primes up to 300 with a sieve and report twin primes, the largest gap and primality of small numbers";
    "java-bubble-sort", Java, "java/BubbleSort.java",
        "sort pseudo-random arrays with bubble sort and selection sort and report the swap count and sortedness";
    "java-binary-search", Java, "java/BinarySearch.java",
        "search an arithmetic sequence with binary, linear and lower-bound search and count values within a range";
    "java-matrix-ops", Java, "java/MatrixOps.java",
        "multiply and exponentiate small integer matrices and print their traces and determinants";
    "java-knapsack", Java, "java/Knapsack.java",
        "solve the 0/1 knapsack problem by dynamic programming for several capacities and compare with a greedy strategy";
    "java-gcd-lcm", Java, "java/GcdLcm.java",
        "compute greatest common divisors, least common multiples, totients, divisor counts and modular inverses";
    "java-palindromes", Java, "java/Palindromes.java",
        "detect palindromes, find the longest palindromic substring and count palindromic substrings and numbers";
    "java-run-length", Java, "java/RunLength.java",
        "run-length encode and decode strings and report compression ratios and the longest run";
    "java-pascal-triangle", Java, "java/PascalTriangle.java",
        "print Pascal's triangle with 12 rows, their sums and odd entries, and central binomial coefficients";
    "java-bank-ledger", Java, "java/BankLedger.java",
        "simulate bank accounts with deposits, withdrawals, transfers and yearly interest";
    "java-statistics", Java, "java/Statistics.java",
        "generate a pseudo-random data set and print its mean, variance, mode and histogram";
    "java-collatz", Java, "java/Collatz.java",
        "compute Collatz sequence lengths, peaks and digit sums and find the longest sequence below 100";
    "java-caesar-cipher", Java, "java/CaesarCipher.java",
        "encrypt and decrypt a message with Caesar shifts and a Vigenere key and guess the shift from letter frequencies";
    "java-word-frequency", Java, "java/WordFrequency.java",
        "tokenize a short text and report word frequencies, the most common word, average length and a bigram count";
};

/// All demo seeds, Python first, in a fixed order.
pub fn demo_corpus() -> Vec<SeedProgram> {
    DEMO.iter()
        .map(|(id, lang, spec, code)| SeedProgram::new(*id, *lang, *spec, *code))
        .collect()
}

/// Demo seeds of one language.
pub fn demo_seeds(language: SubjectLanguage) -> Vec<SeedProgram> {
    demo_corpus().into_iter().filter(|s| s.subject_language == language).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault_injector::{discover_fault_sites, FaultKind};
    use crate::source_model::parse;

    #[test]
    fn fifteen_per_language_all_parse_with_every_fault_kind() {
        for language in SubjectLanguage::ALL {
            let seeds = demo_seeds(language);
            assert_eq!(seeds.len(), 15);
            for seed in seeds {
                assert!(seed.loc >= 50, "{} has {} LOC", seed.seed_id, seed.loc);
                let index = parse(language, &seed.source_text).unwrap_or_else(|e| panic!("{}: {e}", seed.seed_id));
                for kind in FaultKind::ALL {
                    assert!(!discover_fault_sites(&index, kind).is_empty(), "{} lacks {kind}", seed.seed_id);
                }
            }
        }
    }
}
