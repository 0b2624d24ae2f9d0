//! Named structure families used by campaigns, tests and examples.

use alloc::vec::Vec;

use crate::structure::Structure;

/// Linear chain `0 < 1 < .. < n-1` as relation `R`, optionally with the
/// diagonal.
pub fn chain(n: usize, reflexive: bool) -> Structure {
    let pairs: Vec<[usize; 2]> = (0..n)
        .flat_map(|x| (0..n).map(move |y| [x, y]))
        .filter(|&[x, y]| x < y || (reflexive && x == y))
        .collect();
    Structure::new(n)
        .expect("universe within limits")
        .with_relation("R", 2, pairs)
        .expect("valid pairs")
}

/// Standard cyclic order on `Z_n` as ternary relation `C`: all `(a,b,c)`
/// with `0 < (b-a) mod n < (c-a) mod n`.
pub fn cyclic_order(n: usize) -> Structure {
    let mut triples = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (db, dc) = ((b + n - a) % n, (c + n - a) % n);
                if 0 < db && db < dc {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    Structure::new(n)
        .expect("universe within limits")
        .with_relation("C", 3, triples)
        .expect("valid triples")
}

/// Circulant digraph on `Z_n` with arcs `x -> x+d` for `d` in `connection`,
/// as relation `R`.
pub fn circulant(n: usize, connection: &[usize]) -> Structure {
    let pairs: Vec<[usize; 2]> = (0..n)
        .flat_map(|x| connection.iter().map(move |&d| [x, (x + d) % n]))
        .collect();
    Structure::new(n)
        .expect("universe within limits")
        .with_relation("R", 2, pairs)
        .expect("valid pairs")
}

/// The directed 3-cycle `0 -> 1 -> 2 -> 0`.
pub fn c3() -> Structure {
    circulant(3, &[1])
}

/// The tournament on `Z_7` whose arcs go to quadratic residues `{1,2,4}`.
pub fn paley7() -> Structure {
    circulant(7, &[1, 2, 4])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(chain(4, false).relation("R").unwrap().len(), 6);
        assert_eq!(chain(4, true).relation("R").unwrap().len(), 10);
        assert_eq!(cyclic_order(4).relation("C").unwrap().len(), 12);
        assert_eq!(cyclic_order(5).relation("C").unwrap().len(), 5 * 6);
        assert_eq!(paley7().relation("R").unwrap().len(), 21);
        assert_eq!(
            c3().relation("R").unwrap().to_vec(),
            [[0, 1], [1, 2], [2, 0]]
        );
    }
}
