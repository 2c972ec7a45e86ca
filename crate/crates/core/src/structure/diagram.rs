//! The ideal/morphism cube and the block decomposition of a web.

use std::sync::Arc;

use serde::Serialize;

use super::ideals::{generated_set, is_ideal, stable_multiple};
use super::{restrict, restrict_morphism, split_sequence, MonoidMap, StructureError};
use crate::abgroups::DEFAULT_WINDOW;
use crate::order::FiniteOrderedMonoid;
use crate::webbing::WebbedSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    /// Largest positive element of the ideal (index in the domain).
    pub generator: usize,
    /// The ideal of the codomain generated by the image of the generator.
    pub image_ideal: Vec<usize>,
    pub squares: Vec<(String, bool)>,
    pub rows_exact: Vec<(String, bool)>,
}

impl DiagramReport {
    pub fn holds(&self) -> bool {
        self.squares
            .iter()
            .chain(&self.rows_exact)
            .all(|(_, ok)| *ok)
    }
}

fn sub(m: &Arc<FiniteOrderedMonoid>, members: &[usize]) -> Result<MonoidMap, StructureError> {
    let positive = members.iter().all(|&x| m.is_positive(x));
    let r = Arc::new(restrict(m, members, positive)?);
    MonoidMap::new(r, m.clone(), members.to_vec())
}

fn square(
    name: &str,
    top_then_right: Result<MonoidMap, StructureError>,
    left_then_bottom: Result<MonoidMap, StructureError>,
) -> Result<(String, bool), StructureError> {
    Ok((
        name.to_string(),
        top_then_right?.map == left_then_bottom?.map,
    ))
}

/// Restricts `alpha: S -> T` to a singly generated ideal `I` and the ideal of `T` generated by
/// the image of the largest positive element of `I`, and checks that the four split sequences
/// and the maps between them commute.
pub fn ideal_morphism_diagram(
    alpha: &MonoidMap,
    ideal: &[usize],
) -> Result<DiagramReport, StructureError> {
    let s = &alpha.domain;
    let t = &alpha.codomain;
    if let Some(f) = is_ideal(s, ideal).failure {
        return Err(StructureError::NotAnIdeal(f));
    }
    let mut ideal = ideal.to_vec();
    ideal.sort_unstable();
    if !ideal
        .iter()
        .any(|&x| s.is_positive(x) && generated_set(s, x) == ideal)
    {
        return Err(StructureError::NotSinglyGenerated);
    }
    let inc_i = sub(s, &ideal)?;
    let sp_i = split_sequence(&inc_i.domain)?;
    let generator = ideal[sp_i.maximal.neutral];
    let image_ideal = generated_set(t, alpha.map[generator]);
    let inc_ia = sub(t, &image_ideal)?;
    let restricted: Vec<usize> = ideal
        .iter()
        .map(|&x| image_ideal.iter().position(|&y| y == alpha.map[x]))
        .collect::<Option<_>>()
        .ok_or_else(|| StructureError::Inconsistent("restriction leaves the image ideal".into()))?;
    let a_res = MonoidMap::new(inc_i.domain.clone(), inc_ia.domain.clone(), restricted)?;
    let sp_ia = split_sequence(&inc_ia.domain)?;
    let sp_s = split_sequence(s)?;
    let sp_t = split_sequence(t)?;

    let mut squares = Vec::new();
    let rows = [
        ("restriction", &a_res, &sp_i, &sp_ia),
        ("morphism", alpha, &sp_s, &sp_t),
        ("ideal inclusion", &inc_i, &sp_i, &sp_s),
        ("image inclusion", &inc_ia, &sp_ia, &sp_t),
    ];
    let mut plus_max = Vec::new();
    for (name, f, src, dst) in rows {
        let (fp, fm) = restrict_morphism(f)?;
        squares.push(square(
            &format!("{name}: cone"),
            fp.then(&dst.i),
            src.i.then(f),
        )?);
        squares.push(square(
            &format!("{name}: maximal"),
            f.then(&dst.j),
            src.j.then(&fm),
        )?);
        plus_max.push((fp, fm));
    }
    squares.push(square(
        "side: whole",
        inc_i.then(alpha),
        a_res.then(&inc_ia),
    )?);
    let (rp, rm) = &plus_max[0];
    let (ap, am) = &plus_max[1];
    let (ip, im) = &plus_max[2];
    let (jp, jm) = &plus_max[3];
    squares.push(square("side: cone", ip.then(ap), rp.then(jp))?);
    squares.push(square("side: maximal", im.then(am), rm.then(jm))?);

    let rows_exact = vec![
        ("ideal".to_string(), sp_i.split_exact()),
        ("image ideal".to_string(), sp_ia.split_exact()),
        ("domain".to_string(), sp_s.split_exact()),
        ("codomain".to_string(), sp_t.split_exact()),
    ];
    Ok(DiagramReport {
        generator,
        image_ideal,
        squares,
        rows_exact,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// The ideal of the base indexing this block.
    pub ideal: Vec<usize>,
    /// Largest element of the ideal.
    pub generator: usize,
    /// Base elements generating exactly this ideal.
    pub generating: Vec<usize>,
    /// Web elements lying over `generating`.
    pub elements: Vec<usize>,
    /// Every edge from a generating element to the generator is bijective, so the block is
    /// the product of `generating` with the fiber over the generator.
    pub product_form: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub partition_ok: bool,
}

/// Splits a web into blocks indexed by the singly generated ideals of its base.
pub fn decompose(w: &WebbedSemigroup) -> Result<Decomposition, StructureError> {
    let system = w.system();
    let base = system.base();
    let ideal_of: Vec<Vec<usize>> = (0..base.size()).map(|s| generated_set(base, s)).collect();
    let mut ideals: Vec<Vec<usize>> = ideal_of.clone();
    ideals.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    ideals.dedup();
    let mut blocks = Vec::new();
    let mut owner = vec![0usize; w.len()];
    for ideal in ideals {
        let generating: Vec<usize> = (0..base.size()).filter(|&s| ideal_of[s] == ideal).collect();
        let generator = stable_multiple(base, generating[0]);
        if generating
            .iter()
            .any(|&s| stable_multiple(base, s) != generator)
            || !ideal.iter().all(|&y| base.leq(y, generator))
        {
            return Err(StructureError::Inconsistent(
                "block generator is not the top of its ideal".into(),
            ));
        }
        let elements: Vec<usize> = (0..w.len())
            .filter(|&a| generating.contains(&w.pair(a).0))
            .collect();
        for &a in &elements {
            owner[a] += 1;
        }
        let product_form = generating
            .iter()
            .all(|&s| system.edge(s, generator).is_bijective(DEFAULT_WINDOW).0);
        blocks.push(Block {
            ideal,
            generator,
            generating,
            elements,
            product_form,
        });
    }
    let partition_ok = owner.iter().all(|&c| c == 1);
    Ok(Decomposition {
        blocks,
        partition_ok,
    })
}
