#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weelcp::{build_lcp_kasai, build_suffix_array, LcpArray, SuffixArray, Text};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` bytes drawn uniformly from `sigma` non-zero symbols.
pub fn random_bytes(rng: &mut impl Rng, n: usize, sigma: usize) -> Vec<u8> {
    assert!((1..=255).contains(&sigma));
    let base = if sigma <= 26 { b'a' } else { 1 };
    (0..n)
        .map(|_| base + rng.gen_range(0..sigma) as u8)
        .collect()
}

pub fn fibonacci(n: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"b".to_vec(), b"a".to_vec());
    while b.len() < n {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = b;
        b = next;
    }
    b.truncate(n);
    b
}

pub fn periodic(n: usize) -> Vec<u8> {
    b"ab".iter().copied().cycle().take(n).collect()
}

pub fn unary(n: usize) -> Vec<u8> {
    vec![b'a'; n]
}

pub struct Indexed {
    pub text: Text,
    pub sa: SuffixArray,
    pub h: LcpArray,
}

impl Indexed {
    pub fn new(raw: &[u8]) -> Self {
        let text = Text::load(raw).unwrap();
        let sa = build_suffix_array(&text);
        let h = build_lcp_kasai(&text, &sa);
        Indexed { text, sa, h }
    }

    pub fn n(&self) -> usize {
        self.text.len()
    }
}

/// Small mixed corpus: random texts over several alphabets plus repetitive ones.
pub fn corpus(seed: u64, count: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let sigma = [2, 4, 26, 255][k % 4];
        let n = r.gen_range(0..=max_len);
        out.push(random_bytes(&mut r, n, sigma));
    }
    for n in [0, 1, 2, 7, 64, 257, max_len] {
        out.push(unary(n));
        out.push(periodic(n));
        out.push(fibonacci(n));
    }
    out
}
