//! Extending a Reedy fibration along a levelwise acyclic cofibration, one
//! object of the base at a time in order of degree, with the fibers of each
//! new level classified by a universe.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{FiniteCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::lcc::Slice;
use crate::limits::{colimit, is_pullback_square, limit, pullback, pushout, Colimit, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::reedy::ReedyStructure;
use crate::search::MapSearch;
use crate::simplicial::SimplicialSite;
use crate::universe::{smallness_check, smallness_violation, Universe, WellOrderedFibration};

/// Whether the mono `i: A ↪ B` of simplicial sets is a finite composite of
/// horn fillings: greedily attach a simplex together with its one missing face.
pub fn is_anodyne(sets: &SimplicialSite, i: &NatMap) -> bool {
    if !i.is_mono() {
        return false;
    }
    let b = i.dst();
    let delta = sets.delta();
    let top = sets.dim();
    let mut have: Vec<Vec<bool>> = b.sizes().iter().map(|&n| vec![false; n]).collect();
    for k in 0..=top {
        for x in 0..i.src().size(k) {
            have[k][i.apply(k, x)] = true;
        }
    }
    let faces: Vec<Vec<MorId>> = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|j| {
                    let vals: Vec<usize> = (0..=n).filter(|&v| v != j).collect();
                    sets.delta_mor(&vals, n).expect("face map exists")
                })
                .collect()
        })
        .collect();
    loop {
        if have.iter().all(|l| l.iter().all(|&h| h)) {
            return true;
        }
        let mut progressed = false;
        'search: for n in 1..=top {
            let nondeg = sets.nondegenerate(b, 0, n);
            for &s in &nondeg {
                if have[n][s] {
                    continue;
                }
                let missing: Vec<usize> = (0..=n).filter(|&j| !have[n - 1][b.act(faces[n][j], s)]).collect();
                if missing.len() != 1 {
                    continue;
                }
                let f = b.act(faces[n][missing[0]], s);
                if !sets.nondegenerate(b, 0, n - 1).contains(&f) {
                    continue;
                }
                for m in 0..=top {
                    for &g in delta.hom(m, n) {
                        have[m][b.act(g, s)] = true;
                    }
                }
                progressed = true;
                break 'search;
            }
        }
        if !progressed {
            return false;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepLog {
    pub c: ObjId,
    /// `L_c P -> L_c Q` is monic
    pub latching_mono: bool,
    /// `A_c ×_{M_c A} M_c P -> B_c ×_{M_c B} M_c Q` is monic
    pub comparison_mono: bool,
    /// the pushout `D` embeds in `B_c ×_{M_c B} M_c Q`
    pub pushout_mono: bool,
    /// `M_c Q -> M_c B` is a fibration
    pub matching_fibration: bool,
    /// `P_c -> Q_c` is monic
    pub top_mono: bool,
    /// the comparison map, `D` inclusion and `P_c -> Q_c` are built by horn filling
    pub comparison_anodyne: bool,
    pub pushout_anodyne: bool,
    pub top_anodyne: bool,
}

impl StepLog {
    pub fn holds(&self) -> bool {
        self.latching_mono
            && self.comparison_mono
            && self.pushout_mono
            && self.matching_fibration
            && self.top_mono
            && self.comparison_anodyne
            && self.pushout_anodyne
            && self.top_anodyne
    }
}

#[derive(Clone, Debug)]
pub struct ReedyExtension {
    /// `Q -> B`
    pub q: Slice,
    /// `P -> Q` over `i`
    pub top: NatMap,
    /// `P ≅ i*Q`
    pub iso: NatMap,
    pub steps: Vec<StepLog>,
}

/// One finished level.
struct Level {
    q: Presheaf,
    to_b: NatMap,
    top: NatMap,
}

struct Partial<'a> {
    r: &'a ReedyStructure,
    levels: Vec<Option<Level>>,
    /// `Q(α⁻): Q_e -> Q_c` for `α⁻: c -> e`
    down: HashMap<MorId, NatMap>,
    /// `Q(α⁺): Q_c -> Q_e` for `α⁺: e -> c`
    up: HashMap<MorId, NatMap>,
}

impl Partial<'_> {
    fn at(&self, d: ObjId) -> Presheaf {
        self.levels[d].as_ref().expect("lower levels are built").q.clone()
    }

    fn restr(&self, b: MorId) -> NatMap {
        let cat = self.r.category();
        let (p, m) = self.r.factor(b).expect("valid Reedy structure");
        let id_or = |f: MorId, map: &HashMap<MorId, NatMap>, obj: ObjId| {
            if cat.is_identity(f) {
                NatMap::identity(&self.at(obj))
            } else {
                map[&f].clone()
            }
        };
        let qp = id_or(p, &self.up, cat.cod(p));
        let qm = id_or(m, &self.down, cat.cod(m));
        qm.after_unchecked(&qp)
    }
}

/// Extends `top` along the mono `along`, first trying to send every new
/// element into `preferred`, then without restriction.
fn search_extension(along: &NatMap, top: &NatMap, target: &Presheaf, preferred: &[Vec<usize>], max_nodes: u64, what: String) -> Result<NatMap> {
    let src = along.dst();
    let mut old: Vec<Vec<bool>> = src.sizes().iter().map(|&n| vec![false; n]).collect();
    for (c, row) in old.iter_mut().enumerate() {
        for x in 0..along.src().size(c) {
            row[along.apply(c, x)] = true;
        }
    }
    let mut s = MapSearch::new(src, target)?;
    s.fix_along(along, top).guided(true).max_nodes(max_nodes).context(what.clone());
    let mut narrow = s.clone();
    for (c, row) in old.iter().enumerate() {
        for (x, &o) in row.iter().enumerate() {
            if !o {
                narrow.restrict(c, x, preferred[c].clone());
            }
        }
    }
    if let Some(m) = narrow.first()? {
        return Ok(m);
    }
    s.first()?.ok_or(Error::NoLift(what))
}

/// Builds `Q ↠ B` with `i*Q ≅ P`.
pub fn extend_reedy_fibration(
    r: &ReedyStructure,
    elegant: bool,
    site: &SimplicialSite,
    i: &NatMap,
    p: &Slice,
    univ: &Universe,
) -> Result<ReedyExtension> {
    let cat: &Arc<FiniteCategory> = r.category();
    let report = r.validate();
    if !report.passed() {
        return Err(Error::Precondition(format!("not a Reedy structure: {}", report.violations.join("; "))));
    }
    if !elegant {
        return Err(Error::Precondition("the Reedy structure is not declared elegant".into()));
    }
    if !i.is_mono() {
        return Err(Error::Precondition("i is not a monomorphism".into()));
    }
    p.check_base(i.src())?;
    let sets = site.sset_site();
    if !crate::presheaf::same_category(univ.site().site(), sets.site()) {
        return Err(Error::BaseMismatch);
    }
    for c in 0..cat.num_objects() {
        if !is_anodyne(&sets, &site.at_object_map(i, c)) {
            return Err(Error::Precondition(format!("i at object {c} is not built by horn filling")));
        }
    }
    if let Some(e) = smallness_violation(p.proj(), univ.kappa()) {
        return Err(e);
    }
    let (lo, hi) = univ.config().fib_range;
    if let Some(c) = r.fibration_failure(site, p.proj(), lo, hi)? {
        return Err(Error::Precondition(format!("P is not a Reedy fibration at object {c}")));
    }
    let max = univ.config().max_nodes;
    // lifts through product codes keep fiber types constant along simplices
    let mask = univ.product_mask()?;
    let pref_u: Vec<Vec<usize>> = mask.iter().map(|m| (0..m.len()).filter(|&k| m[k]).collect()).collect();
    let pref_ut: Vec<Vec<usize>> = (0..mask.len())
        .map(|o| (0..univ.ut().size(o)).filter(|&x| mask[o][univ.p().apply(o, x)]).collect())
        .collect();
    let (a, b) = (i.src(), i.dst());
    let mut part = Partial { r, levels: (0..cat.num_objects()).map(|_| None).collect(), down: HashMap::new(), up: HashMap::new() };
    let mut steps = Vec::new();
    for c in r.by_degree() {
        let pa = p.proj();
        let (ic, pc) = (site.at_object_map(i, c), site.at_object(p.total(), c));
        // matching side
        let ma = r.matching(site, a, c)?;
        let mb = r.matching(site, b, c)?;
        let mp = r.matching(site, p.total(), c)?;
        let mp_ma = r.matching_map(site, pa, &mp, &ma)?;
        let rp = pullback(&ma.map, &mp_ma)?;
        let pc_rp = rp.factor_from(&pc, &[site.at_object_map(pa, c), mp.map.clone()])?;
        let (mq_diag, mq_index) = r.boundary_diagram_with(sets.site(), c, false, &|d| part.at(d), &|x| part.restr(x))?;
        let mq: Limit = limit(&mq_diag);
        let mq_mb = mb.limit.factor_from(
            &mq.apex,
            &mq_index.iter().enumerate().map(|(j, &(d, _))| part.levels[d].as_ref().unwrap().to_b.after_unchecked(&mq.legs[j])).collect::<Vec<_>>(),
        )?;
        let mp_mq = mq.factor_from(
            &mp.object,
            &mp.index.iter().enumerate().map(|(j, &(d, _))| part.levels[d].as_ref().unwrap().top.after_unchecked(&mp.limit.legs[j])).collect::<Vec<_>>(),
        )?;
        let rq = pullback(&mb.map, &mq_mb)?;
        let k = rq.factor_from(&rp.apex, &[ic.after_unchecked(&rp.legs[0]), mp_mq.after_unchecked(&rp.legs[1])])?;
        // latching side
        let lp = r.latching(site, p.total(), c)?;
        let (lq_diag, lq_index) = r.boundary_diagram_with(sets.site(), c, true, &|d| part.at(d), &|x| part.restr(x))?;
        let lq: Colimit = colimit(&lq_diag);
        let lp_lq = lp.colimit.factor(
            &lq.apex,
            &lp.index.iter().enumerate().map(|(j, &(d, _))| lq.injections[j].after_unchecked(&part.levels[d].as_ref().unwrap().top)).collect::<Vec<_>>(),
        )?;
        // L_c Q -> B_c and L_c Q -> M_c Q
        let lq_bc = lq.factor(
            &site.at_object(b, c),
            &lq_index
                .iter()
                .map(|&(d, al)| crate::reedy::restrict(site, b, al).after_unchecked(&part.levels[d].as_ref().unwrap().to_b))
                .collect::<Vec<_>>(),
        )?;
        let lq_mq = lq.factor(
            &mq.apex,
            &lq_index
                .iter()
                .map(|&(d, al)| {
                    let legs: Vec<NatMap> = mq_index.iter().map(|&(_, be)| part.restr(cat.compose(al, be))).collect();
                    mq.factor_from(&part.at(d), &legs)
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let lambda = rq.factor_from(&lq.apex, &[lq_bc, lq_mq])?;
        let sets_fib = sets.is_fibration(&mq_mb, lo, hi)?;
        // classify P_c over its comparison object
        let wp = WellOrderedFibration::by_id(Slice::new(pc_rp.clone()));
        let cl = univ.classify(&wp)?;
        let pc_ut = cl.pullback.legs[1].after_unchecked(&cl.iso);
        // extend over L_c Q into Ũ
        let lp_ut = pc_ut.after_unchecked(&lp.map);
        let lq_ut = search_extension(&lp_lq, &lp_ut, univ.ut(), &pref_ut, max, format!("extending into the total space at object {c}"))?;
        // the pushout D and its map to U
        let lp_rp = pc_rp.after_unchecked(&lp.map);
        let d = pushout(&lp_rp, &lp_lq)?;
        let d_u = d.factor(univ.u(), &[cl.chi.after_unchecked(&lp_rp), cl.chi.clone(), univ.p().after_unchecked(&lq_ut)])?;
        let d_rq = d.factor(&rq.apex, &[k.after_unchecked(&lp_rp), k.clone(), lambda.clone()])?;
        let g = search_extension(&d_rq, &d_u, univ.u(), &pref_u, max, format!("extending the classifying map at object {c}"))?;
        let qpb = pullback(&g, univ.p())?;
        let qc = qpb.apex.clone();
        let proj = qpb.legs[0].clone();
        let ell = qpb.factor_from(&lq.apex, &[lambda, lq_ut])?;
        let top_c = qpb.factor_from(&pc, &[k.after_unchecked(&pc_rp), pc_ut])?;
        for (j, &(_, al)) in lq_index.iter().enumerate() {
            part.down.insert(al, ell.after_unchecked(&lq.injections[j]));
        }
        for (j, &(_, be)) in mq_index.iter().enumerate() {
            part.up.insert(be, mq.legs[j].after_unchecked(&rq.legs[1]).after_unchecked(&proj));
        }
        steps.push(StepLog {
            c,
            latching_mono: lp_lq.is_mono(),
            comparison_mono: k.is_mono(),
            pushout_mono: d_rq.is_mono(),
            matching_fibration: sets_fib,
            top_mono: top_c.is_mono(),
            comparison_anodyne: is_anodyne(&sets, &k),
            pushout_anodyne: is_anodyne(&sets, &d_rq),
            top_anodyne: is_anodyne(&sets, &top_c),
        });
        part.levels[c] = Some(Level { q: qc, to_b: rq.legs[0].after_unchecked(&proj), top: top_c });
    }
    let (q, top) = assemble(site, &part, p.total())?;
    let to_b = NatMap::new(
        q.clone(),
        b.clone(),
        (0..site.site().num_objects())
            .map(|o| {
                let (c, kk) = site.split_obj(o);
                part.levels[c].as_ref().unwrap().to_b.component(kk).to_vec()
            })
            .collect(),
    )?;
    let q_slice = Slice::new(to_b);
    let ipb = pullback(i, q_slice.proj())?;
    let iso = ipb.factor_from(p.total(), &[p.proj().clone(), top.clone()])?;
    if !iso.is_iso() {
        return Err(Error::Invalid("the extension does not restrict to P".into()));
    }
    Ok(ReedyExtension { q: q_slice, top, iso, steps })
}

/// Glues the levels into a presheaf on `C × Δ≤N`, with `P -> Q`.
fn assemble(site: &SimplicialSite, part: &Partial<'_>, p: &Presheaf) -> Result<(Presheaf, NatMap)> {
    let s = site.site();
    let sizes: Vec<usize> = (0..s.num_objects())
        .map(|o| {
            let (c, k) = site.split_obj(o);
            part.at(c).size(k)
        })
        .collect();
    let mut restr_cache: HashMap<MorId, NatMap> = HashMap::new();
    let action = (0..s.num_morphisms())
        .map(|a| {
            let (al, g) = site.split_mor(a);
            let ra = restr_cache.entry(al).or_insert_with(|| part.restr(al)).clone();
            let (x, k) = site.split_obj(s.cod(a));
            let qx = part.at(site.base().dom(al));
            (0..part.at(x).size(k)).map(|e| qx.act(g, ra.apply(k, e))).collect()
        })
        .collect();
    let q = Presheaf::new(s.clone(), sizes, action)?;
    let comps = (0..s.num_objects())
        .map(|o| {
            let (c, k) = site.split_obj(o);
            part.levels[c].as_ref().unwrap().top.component(k).to_vec()
        })
        .collect();
    let top = NatMap::new(p.clone(), q.clone(), comps)?;
    Ok((q, top))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectCheck {
    pub c: ObjId,
    /// `P_c` and `Q_c` agree on the arrows touching `c`
    pub natural: bool,
    /// comparison objects over `A_c -> B_c`
    pub upper: bool,
    /// `P_c -> Q_c` over the comparison objects
    pub lower: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub small: bool,
    pub reedy_fibration: bool,
    pub pullback: bool,
    pub objects: Vec<ObjectCheck>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.small && self.reedy_fibration && self.pullback && self.objects.iter().all(|o| o.natural && o.upper && o.lower)
    }

    pub fn failing_objects(&self) -> Vec<ObjId> {
        self.objects.iter().filter(|o| !(o.natural && o.upper && o.lower)).map(|o| o.c).collect()
    }
}

/// Independent certificate for a candidate `top: P -> Q` over `i`.
pub fn verify_extension(
    r: &ReedyStructure,
    site: &SimplicialSite,
    i: &NatMap,
    p: &Slice,
    q: &Slice,
    top: &NatMap,
    kappa: usize,
    (lo, hi): (usize, usize),
) -> Result<ExtensionReport> {
    let s = site.site();
    let mut objects = Vec::new();
    for c in r.by_degree() {
        let natural = (0..s.num_morphisms())
            .filter(|&a| site.split_obj(s.dom(a)).0 == c || site.split_obj(s.cod(a)).0 == c)
            .all(|a| {
                let (x, y) = (s.dom(a), s.cod(a));
                (0..p.total().size(y)).all(|e| top.apply(x, p.total().act(a, e)) == q.total().act(a, top.apply(y, e)))
            });
        let (upper, lower) = if natural {
            let mp = r.matching(site, p.total(), c)?;
            let mq = r.matching(site, q.total(), c)?;
            let ma = r.matching(site, i.src(), c)?;
            let mb = r.matching(site, i.dst(), c)?;
            let rp = pullback(&ma.map, &r.matching_map(site, p.proj(), &mp, &ma)?)?;
            let rq = pullback(&mb.map, &r.matching_map(site, q.proj(), &mq, &mb)?)?;
            let mtop = r.matching_map(site, top, &mp, &mq)?;
            let ic = site.at_object_map(i, c);
            let k = rq.factor_from(&rp.apex, &[ic.after_unchecked(&rp.legs[0]), mtop.after_unchecked(&rp.legs[1])])?;
            let pc = site.at_object(p.total(), c);
            let qc = site.at_object(q.total(), c);
            let pc_rp = rp.factor_from(&pc, &[site.at_object_map(p.proj(), c), mp.map.clone()])?;
            let qc_rq = rq.factor_from(&qc, &[site.at_object_map(q.proj(), c), mq.map.clone()])?;
            (
                is_pullback_square(&k, &rp.legs[0], &rq.legs[0], &ic)?,
                is_pullback_square(&site.at_object_map(top, c), &pc_rp, &qc_rq, &k)?,
            )
        } else {
            (false, false)
        };
        objects.push(ObjectCheck { c, natural, upper, lower });
    }
    let natural_all = objects.iter().all(|o| o.natural);
    Ok(ExtensionReport {
        small: smallness_check(q.proj(), kappa),
        reedy_fibration: r.is_reedy_fibration(site, q.proj(), lo, hi)?,
        pullback: natural_all && is_pullback_square(top, p.proj(), q.proj(), i)?,
        objects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;

    #[test]
    fn horn_inclusions_are_anodyne_and_boundaries_are_not() {
        let s = SimplicialSite::sets(TruncationConfig::new(2));
        for (n, k) in [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)] {
            assert!(is_anodyne(&s, &s.horn(0, n, k).unwrap().1));
        }
        assert!(!is_anodyne(&s, &s.boundary(0, 1).unwrap().1));
        assert!(!is_anodyne(&s, &s.boundary(0, 2).unwrap().1));
    }
}
