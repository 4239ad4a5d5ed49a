#![allow(dead_code)]

use katka::model::parse_newick_str;
use katka::{GenomeRecord, KatkaIndex, PhyloTree};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const SAMPLE_TREE: &str = "((GATTACAT,(AGATACAT,GATACAT)),(GATTAGAT,GATTAGATA));";
pub const SAMPLE_GENOMES: [&str; 5] = ["GATTACAT", "AGATACAT", "GATACAT", "GATTAGAT", "GATTAGATA"];

pub fn sample() -> (PhyloTree, Vec<GenomeRecord>) {
    let tree = parse_newick_str(SAMPLE_TREE).unwrap();
    let genomes = SAMPLE_GENOMES
        .iter()
        .map(|s| GenomeRecord::new(*s, s.as_bytes()))
        .collect();
    (tree, genomes)
}

pub fn sample_index() -> KatkaIndex {
    let (tree, genomes) = sample();
    KatkaIndex::build(tree, &genomes).unwrap()
}

/// Newick over `labels` in the given order, merging random runs of 2..=max_arity
/// neighbouring subtrees until one remains.
pub fn random_newick(rng: &mut StdRng, labels: &[String], max_arity: usize) -> String {
    let mut items: Vec<String> = labels.to_vec();
    while items.len() > 1 {
        let arity = rng.gen_range(2..=max_arity.max(2)).min(items.len());
        let at = rng.gen_range(0..=items.len() - arity);
        let merged = format!("({})", items[at..at + arity].join(","));
        items.splice(at..at + arity, [merged]);
    }
    format!("{};", items[0])
}

pub fn random_dna(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| *b"ACGT".choose(rng).unwrap()).collect()
}

/// A random instance: `g` genomes over ACGT, each a mutated copy of a shared
/// ancestor (so the parse has long copies) or fresh random text.
pub fn random_instance(rng: &mut StdRng, g: usize, max_len: usize) -> (PhyloTree, Vec<GenomeRecord>) {
    let len = rng.gen_range(1..=max_len);
    let ancestor = random_dna(rng, len);
    let genomes: Vec<GenomeRecord> = (0..g)
        .map(|i| {
            let seq = if rng.gen_bool(0.7) {
                let mut s = ancestor.clone();
                for _ in 0..rng.gen_range(0..4) {
                    let p = rng.gen_range(0..s.len());
                    s[p] = *b"ACGT".choose(rng).unwrap();
                }
                let keep = rng.gen_range(1..=s.len());
                s.truncate(keep);
                s
            } else {
                let len = rng.gen_range(1..=max_len);
                random_dna(rng, len)
            };
            GenomeRecord::new(format!("g{i}"), seq)
        })
        .collect();
    let labels: Vec<String> = genomes.iter().map(|g| g.name.clone()).collect();
    let tree = parse_newick_str(&random_newick(rng, &labels, 2)).unwrap();
    (tree, genomes)
}

/// Random pattern: either fresh ACGT or a (possibly mutated) genome substring.
pub fn random_pattern(rng: &mut StdRng, genomes: &[GenomeRecord], max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(1..=max_len);
    if rng.gen_bool(0.5) {
        return random_dna(rng, len);
    }
    let g = &genomes[rng.gen_range(0..genomes.len())].sequence;
    let start = rng.gen_range(0..g.len());
    let mut p: Vec<u8> = g[start..(start + len).min(g.len())].to_vec();
    if rng.gen_bool(0.3) {
        let i = rng.gen_range(0..p.len());
        p[i] = *b"ACGT".choose(rng).unwrap();
    }
    if rng.gen_bool(0.5) {
        let extra = rng.gen_range(0..4);
        p.extend(random_dna(rng, extra));
    }
    p
}
