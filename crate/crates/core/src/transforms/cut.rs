use crate::kripke::model::{PosetModel, PreorderModel};

/// Same worlds and valuation, order `x <=' y` iff `x = y` or `x < y`
/// strictly. Clusters become antichains.
pub fn cut(m: &PreorderModel) -> PosetModel {
    let mut edges = Vec::new();
    for w in m.worlds() {
        for v in m.up(w).iter() {
            if m.lt(w, v) {
                edges.push((w, v));
            }
        }
    }
    let valuation: Vec<(String, Vec<usize>)> =
        m.valuation().iter().map(|(a, ws)| (a.clone(), ws.to_vec())).collect();
    PreorderModel::from_ids(m.names().to_vec(), edges, valuation)
        .and_then(PreorderModel::into_poset)
        .expect("the strict part of a preorder is a strict partial order")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_becomes_antichain() {
        let m = PreorderModel::parse("worlds a b\norder a b\norder b a\nvaluation p a\n").unwrap();
        let c = cut(&m);
        assert!(!c.le(0, 1) && !c.le(1, 0));
        assert_eq!(c.atom("p").to_vec(), vec![0]);
    }

    #[test]
    fn cluster_below_a_point() {
        let m = PreorderModel::parse("worlds a b t\norder a b\norder b a\norder b t\n").unwrap();
        let c = cut(&m);
        let (a, b, t) = (0, 1, 2);
        assert!(c.lt(a, t) && c.lt(b, t));
        assert!(!c.le(a, b) && !c.le(b, a));
    }

    #[test]
    fn poset_is_unchanged() {
        let m = PreorderModel::parse("worlds a b c\norder a b\norder b c\n").unwrap();
        let c = cut(&m);
        for w in m.worlds() {
            assert_eq!(c.up(w), m.up(w));
        }
    }
}
