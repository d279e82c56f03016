//! Tietze simplification of presentations.

use std::collections::HashSet;

use crate::group::presentation::{Generator, Presentation};
use crate::group::word::Word;

/// Simplify by dropping trivial and repeated relators (up to cyclic
/// permutation and inversion) and eliminating generators that occur exactly
/// once in some relator. Generator images are kept, so the result is again a
/// valid presentation of the same group.
pub fn reduce(p: &Presentation) -> Presentation {
    let n = p.ngens();
    let mut alive = vec![true; n];
    let mut rels = clean(p.relators().to_vec());
    loop {
        // shortest relator in which some generator occurs exactly once
        let pick = rels
            .iter()
            .enumerate()
            .filter_map(|(k, r)| {
                (0..n)
                    .find(|&g| alive[g] && r.occurrences(g) == 1)
                    .map(|g| (r.len(), k, g))
            })
            .min();
        let Some((_, k, g)) = pick else { break };
        let r = rels.remove(k);
        let letters = r.letters();
        let pos = letters.iter().position(|l| l.gen == g).expect("occurs once");
        // r = u g^e v  =>  g^e = (v u)^-1
        let vu = Word::from_letters(letters[pos + 1..].iter().chain(&letters[..pos]).copied());
        let value = if letters[pos].inv { vu } else { vu.inverse() };
        rels = clean(rels.iter().map(|w| w.substitute(g, &value)).collect());
        alive[g] = false;
    }
    let mut map = vec![usize::MAX; n];
    let mut gens: Vec<Generator> = Vec::new();
    for g in 0..n {
        if alive[g] {
            map[g] = gens.len();
            gens.push(p.generators()[g].clone());
        }
    }
    let rels = rels.iter().map(|r| r.renumber(&map)).collect();
    Presentation::new(p.disc(), gens, rels).expect("Tietze moves preserve the relations")
}

fn clean(rels: Vec<Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rels {
        let c = r.cyclically_reduced();
        if c.is_empty() {
            continue;
        }
        if seen.insert(c.cyclic_key()) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_group_keeps_its_relators() {
        let p = Presentation::modular_group();
        let r = reduce(&p);
        assert_eq!(r.ngens(), 2);
        assert_eq!(r.relators().len(), 2);
    }
}
