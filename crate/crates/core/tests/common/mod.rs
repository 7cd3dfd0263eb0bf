//! Oracles shared by the integration suites. They are written directly from
//! the definitions and share no code with the library's evaluators.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use polyreach::geometry::{Maze, Room};
use polyreach::kripke::{PreorderModel, WorldId, WorldSet};

/// Worlds `w` with an up-down path `w <= u1 > v1 < u2 > ... <= uk >= b`,
/// all `ui`, `vi` in `a` and `b` in `b`, found by search over
/// (world, phase) states using only `le` and `lt`.
pub fn reach_by_search(m: &PreorderModel, a: &BTreeSet<WorldId>, b: &BTreeSet<WorldId>) -> BTreeSet<WorldId> {
    let n = m.world_count();
    let mut out = BTreeSet::new();
    for w in 0..n {
        // phase 0: at a peak, phase 1: at a valley
        let mut seen = vec![[false; 2]; n];
        let mut queue = VecDeque::new();
        for &u in a {
            if m.le(w, u) {
                seen[u][0] = true;
                queue.push_back((u, 0));
            }
        }
        let mut found = false;
        while let Some((u, phase)) = queue.pop_front() {
            if phase == 0 {
                if b.iter().any(|&t| m.le(t, u)) {
                    found = true;
                    break;
                }
                for &v in a {
                    if m.lt(v, u) && !seen[v][1] {
                        seen[v][1] = true;
                        queue.push_back((v, 1));
                    }
                }
            } else {
                for &v in a {
                    if m.lt(u, v) && !seen[v][0] {
                        seen[v][0] = true;
                        queue.push_back((v, 0));
                    }
                }
            }
        }
        if found {
            out.insert(w);
        }
    }
    out
}

/// Components of the comparability graph on all worlds, as a component id
/// per world.
pub fn zigzag_components(m: &PreorderModel) -> Vec<usize> {
    let n = m.world_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        for j in 0..n {
            if m.le(i, j) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

pub fn to_set(s: &WorldSet) -> BTreeSet<WorldId> {
    s.iter().collect()
}

pub fn to_world_set(m: &PreorderModel, s: &BTreeSet<WorldId>) -> WorldSet {
    let mut out = m.empty_set();
    for &w in s {
        out.insert(w);
    }
    out
}

/// All subsets of `0..n` as bitmasks turned into sets.
pub fn subsets(n: usize) -> Vec<BTreeSet<WorldId>> {
    (0u32..1 << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

/// Chains of the order, found by brute force over subsets.
pub fn chains_by_subsets(m: &PreorderModel) -> Vec<BTreeSet<WorldId>> {
    subsets(m.world_count())
        .into_iter()
        .filter(|s| !s.is_empty())
        .filter(|s| s.iter().all(|&x| s.iter().all(|&y| m.le(x, y) || m.le(y, x))))
        .collect()
}

/// Squares of the maze that can reach a green square by moves between
/// squares sharing a vertex, staying on red, corridor and white squares.
/// The final step may enter any square touching a green one.
pub fn maze_safe_squares(maze: &Maze) -> BTreeSet<(usize, usize)> {
    let (w, h) = (maze.width() as i64, maze.height() as i64);
    let safe = |x: i64, y: i64| matches!(maze.get(x as usize, y as usize), Room::Red | Room::Corridor | Room::White);
    let neighbours = |x: i64, y: i64| {
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if (dx, dy) != (0, 0) && (0..w).contains(&nx) && (0..h).contains(&ny) {
                    out.push((nx, ny));
                }
            }
        }
        out
    };
    let mut component = vec![usize::MAX; (w * h) as usize];
    let mut comps: Vec<Vec<(i64, i64)>> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !safe(x, y) || component[(y * w + x) as usize] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![(x, y)];
            component[(y * w + x) as usize] = id;
            let mut i = 0;
            while i < members.len() {
                let (cx, cy) = members[i];
                for (nx, ny) in neighbours(cx, cy) {
                    if safe(nx, ny) && component[(ny * w + nx) as usize] == usize::MAX {
                        component[(ny * w + nx) as usize] = id;
                        members.push((nx, ny));
                    }
                }
                i += 1;
            }
            comps.push(members);
        }
    }
    let mut out = BTreeSet::new();
    for members in comps {
        let good = members.iter().any(|&(x, y)| {
            neighbours(x, y).into_iter().any(|(nx, ny)| maze.get(nx as usize, ny as usize) == Room::Green)
        });
        if good {
            out.extend(members.into_iter().map(|(x, y)| (x as usize, y as usize)));
        }
    }
    out
}
