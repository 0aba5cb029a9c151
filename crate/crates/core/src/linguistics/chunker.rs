//! Entity and predicate chunk identification over annotated tokens.

use std::ops::Range;

use super::tagger::{is_be, is_have};
use super::{Chunk, ChunkKind, Pos, TokenAnnotation};

/// Determiners that may open an entity chunk. Quantifiers and possessives
/// stay literal.
const CHUNK_DETERMINERS: &[&str] = &["a", "an", "the", "this", "that", "these", "those", "each", "every"];

/// Nouns that describe the question rather than the domain.
const META_NOUNS: &[&str] =
    &["type", "types", "kind", "kinds", "sort", "sorts", "category", "categories", "difference", "differences"];

fn is_noun(t: &TokenAnnotation) -> bool {
    matches!(t.pos, Pos::Noun | Pos::Propn) && !t.is_placeholder()
}

fn lower(t: &TokenAnnotation) -> String {
    t.surface.to_lowercase()
}

/// Noun phrase starting at `i`: end index and whether it is only meta nouns.
fn noun_phrase(tokens: &[TokenAnnotation], i: usize) -> Option<(usize, bool)> {
    let at = |k: usize| tokens.get(k);
    let mut j = i;
    if at(j).is_some_and(|t| t.pos == Pos::Det && CHUNK_DETERMINERS.contains(&lower(t).as_str())) {
        j += 1;
    }
    if at(j).is_some_and(|t| t.pos == Pos::Adv) && at(j + 1).is_some_and(|t| t.pos == Pos::Adj) {
        j += 1;
    }
    while at(j).is_some_and(|t| t.pos == Pos::Adj && !t.is_placeholder()) {
        j += 1;
    }
    let nouns = j;
    while at(j).is_some_and(is_noun) {
        j += 1;
    }
    if j == nouns {
        return None;
    }
    let meta = tokens[nouns..j].iter().all(|t| META_NOUNS.contains(&lower(t).as_str()));
    Some((j, meta))
}

fn can_head_predicate(t: &TokenAnnotation) -> bool {
    t.pos == Pos::Verb && !is_have(&t.surface) && !is_be(&t.surface)
}

/// Predicate group starting at `i`: AUX* VERB+ PART? ADP?
fn verb_group(tokens: &[TokenAnnotation], i: usize) -> Option<usize> {
    let mut j = i;
    while tokens.get(j).is_some_and(|t| t.pos == Pos::Aux) {
        j += 1;
    }
    let verbs = j;
    while tokens.get(j).is_some_and(can_head_predicate) {
        j += 1;
    }
    if j == verbs {
        return None;
    }
    if tokens.get(j).is_some_and(|t| t.pos == Pos::Part && lower(t) != "to") {
        j += 1;
    }
    if tokens.get(j).is_some_and(|t| t.pos == Pos::Adp && (i..j).contains(&t.head)) {
        j += 1;
    }
    Some(j)
}

/// Finds ECs and PCs, then pulls `aux`-linked auxiliaries into the
/// predicate they modify. Ordinals are dense, per kind, left to right.
pub fn identify_chunks(tokens: &[TokenAnnotation]) -> Vec<Chunk> {
    let mut raw: Vec<(ChunkKind, Vec<Range<usize>>)> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].is_placeholder() {
            raw.push((ChunkKind::Entity, vec![i..i + 1]));
            i += 1;
        } else if let Some(end) = verb_group(tokens, i) {
            raw.push((ChunkKind::Predicate, vec![i..end]));
            i = end;
        } else if let Some((end, meta)) = noun_phrase(tokens, i) {
            if !meta {
                raw.push((ChunkKind::Entity, vec![i..end]));
            }
            i = end;
        } else {
            i += 1;
        }
    }

    let taken = |raw: &[(ChunkKind, Vec<Range<usize>>)], k: usize| raw.iter().any(|(_, s)| s.iter().any(|r| r.contains(&k)));
    for k in 0..tokens.len() {
        let t = &tokens[k];
        if t.pos != Pos::Aux || t.deprel != "aux" || taken(&raw, k) {
            continue;
        }
        if let Some((_, spans)) = raw
            .iter_mut()
            .find(|(kind, spans)| *kind == ChunkKind::Predicate && spans.iter().any(|r| r.contains(&t.head)))
        {
            spans.push(k..k + 1);
            spans.sort_by_key(|r| r.start);
            let mut merged: Vec<Range<usize>> = Vec::new();
            for r in spans.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.end == r.start => last.end = r.end,
                    _ => merged.push(r),
                }
            }
            *spans = merged;
        }
    }

    raw.sort_by_key(|(_, spans)| spans[0].start);
    let mut counts = [0usize; 2];
    raw.into_iter()
        .map(|(kind, spans)| {
            let slot = &mut counts[kind as usize];
            *slot += 1;
            let surface_text = spans
                .iter()
                .map(|r| tokens[r.clone()].iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" ... ");
            Chunk { kind, spans, ordinal: *slot, surface_text }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linguistics::tagger::tag;

    fn chunks(text: &str) -> Vec<(String, Vec<Range<usize>>, String)> {
        identify_chunks(&tag(text)).into_iter().map(|c| (c.slot(), c.spans, c.surface_text)).collect()
    }

    #[test]
    fn awo_6_chunks() {
        let c = chunks("Which plants eat animals?");
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], ("EC1".into(), vec![1..2], "plants".into()));
        assert_eq!(c[1], ("PC1".into(), vec![2..3], "eat".into()));
        assert_eq!(c[2], ("EC2".into(), vec![3..4], "animals".into()));
    }

    #[test]
    fn discontinuous_predicate() {
        let c = chunks("Does a lion eat plants or plant parts?");
        assert_eq!(c[0].0, "PC1");
        assert_eq!(c[0].1, vec![0..1, 3..4]);
        assert_eq!(c[1].2, "a lion");
        assert_eq!(c[3].2, "plant parts");
    }

    #[test]
    fn predicate_takes_its_preposition() {
        let c = chunks("What data are measured for neuromuscular impairment in speech production mechanism?");
        let texts: Vec<&str> = c.iter().map(|c| c.2.as_str()).collect();
        assert_eq!(texts, ["data", "are measured for", "neuromuscular impairment", "speech production mechanism"]);
    }

    #[test]
    fn no_chunks() {
        assert!(chunks("?").is_empty());
    }
}
