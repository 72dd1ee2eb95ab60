use rlcm_core::{Payload, Result, SemigroupElement, SemigroupError};

pub(crate) fn word_parts(s: &SemigroupElement) -> Result<(&[u32], &[u64])> {
    match s.payload() {
        Payload::Word { letters, exponents } => Ok((letters, exponents)),
        other => Err(SemigroupError::MalformedElement(format!(
            "expected a word payload, got {other:?}"
        ))),
    }
}

pub(crate) fn checked_pow(base: u64, exp: usize) -> Result<u64> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(SemigroupError::Overflow("scale"))
}

pub(crate) fn parse_error(input: &str, reason: &str) -> SemigroupError {
    SemigroupError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

/// Splits `x0 x1^2 z3` style input into `(name, index, exponent)` triples.
pub(crate) fn indexed_tokens(input: &str) -> Result<Vec<(char, u32, u64)>> {
    let mut out = Vec::new();
    for tok in input
        .split(|c: char| c.is_whitespace() || c == '*' || c == '·')
        .filter(|t| !t.is_empty())
    {
        if tok == "1" {
            continue;
        }
        let mut chars = tok.chars();
        let name = chars
            .next()
            .ok_or_else(|| parse_error(input, "empty token"))?;
        let rest: String = chars.collect();
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (
                i,
                e.parse::<u64>()
                    .map_err(|_| parse_error(input, "bad exponent"))?,
            ),
            None => (rest.as_str(), 1),
        };
        let idx = idx
            .parse::<u32>()
            .map_err(|_| parse_error(input, &format!("bad index in `{tok}`")))?;
        out.push((name, idx, exp));
    }
    Ok(out)
}

/// All words of length `k` over `0..alphabet`, in lexicographic order.
pub(crate) fn all_words(alphabet: u32, k: usize) -> Vec<Vec<u32>> {
    let mut words = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(words.len() * alphabet as usize);
        for w in &words {
            for j in 0..alphabet {
                let mut v = w.clone();
                v.push(j);
                next.push(v);
            }
        }
        words = next;
    }
    words
}

/// `Some(k)` when `n == base^k`.
pub(crate) fn exact_log(base: u64, n: u64) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    if base < 2 {
        return None;
    }
    let mut k = 0;
    let mut p = 1u64;
    while p < n {
        p = p.checked_mul(base)?;
        k += 1;
    }
    (p == n).then_some(k)
}
