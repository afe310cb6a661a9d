//! Small deterministic DPLL solver with two watched literals.
//!
//! Variables are numbered from 1; literal `v` is "v true", `-v` "v false".
//! Branching always picks the lowest unassigned variable and tries `false`
//! first, so the model found is the lexicographically smallest one under that
//! order.

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf { num_vars, clauses: Vec::new() }
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }
}

fn lit_index(l: i32) -> usize {
    let v = l.unsigned_abs() as usize;
    2 * v + usize::from(l < 0)
}

struct Solver<'a> {
    clauses: &'a [Vec<i32>],
    /// Clauses watching each literal index; a clause watches its first two slots.
    watches: Vec<Vec<usize>>,
    order: Vec<Vec<i32>>,
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn lit_value(&self, l: i32) -> Option<bool> {
        self.value[l.unsigned_abs() as usize].map(|v| if l > 0 { v } else { !v })
    }

    fn assign(&mut self, l: i32) {
        let v = l.unsigned_abs() as usize;
        self.value[v] = Some(l > 0);
        self.trail.push(v);
    }

    /// Unit propagation starting at trail position `head`; false on conflict.
    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let v = self.trail[head];
            head += 1;
            let false_lit = if self.value[v] == Some(true) { -(v as i32) } else { v as i32 };
            let mut ws = std::mem::take(&mut self.watches[lit_index(false_lit)]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.order[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value[first.unsigned_abs() as usize].map(|x| if first > 0 { x } else { !x }) == Some(true) {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = self.value[l.unsigned_abs() as usize].map(|x| if l > 0 { x } else { !x });
                    if val != Some(false) {
                        clause.swap(1, k);
                        self.watches[lit_index(clause[1])].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                match self.lit_value(first) {
                    Some(false) => {
                        ok = false;
                        break;
                    }
                    None => {
                        self.assign(first);
                    }
                    Some(true) => {}
                }
                i += 1;
            }
            let slot = &mut self.watches[lit_index(false_lit)];
            ws.append(slot);
            *slot = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("nonempty trail");
            self.value[v] = None;
        }
    }
}

/// Returns a satisfying assignment indexed by variable (index 0 unused).
pub fn solve(cnf: &Cnf) -> Option<Vec<bool>> {
    let n = cnf.num_vars;
    let mut solver = Solver {
        clauses: &cnf.clauses,
        watches: vec![Vec::new(); 2 * n + 2],
        order: cnf.clauses.clone(),
        value: vec![None; n + 1],
        trail: Vec::new(),
    };
    let mut units = Vec::new();
    for (ci, c) in solver.clauses.iter().enumerate() {
        match c.len() {
            0 => return None,
            1 => units.push(c[0]),
            _ => {
                solver.watches[lit_index(c[0])].push(ci);
                solver.watches[lit_index(c[1])].push(ci);
            }
        }
    }
    for l in units {
        match solver.lit_value(l) {
            Some(true) => {}
            Some(false) => return None,
            None => solver.assign(l),
        }
    }
    if !solver.propagate(0) {
        return None;
    }

    // Explicit stack of decisions: (trail length before, variable, tried_true).
    let mut stack: Vec<(usize, usize, bool)> = Vec::new();
    loop {
        let next = (1..=n).find(|&v| solver.value[v].is_none());
        let Some(var) = next else {
            return Some(solver.value.iter().map(|v| v.unwrap_or(false)).collect());
        };
        let mark = solver.trail.len();
        stack.push((mark, var, false));
        solver.assign(-(var as i32));
        let mut ok = solver.propagate(mark);
        while !ok {
            // Backtrack to the most recent decision still holding its first branch.
            loop {
                let (mark, var, tried_true) = stack.pop()?;
                solver.undo_to(mark);
                if !tried_true {
                    stack.push((mark, var, true));
                    solver.assign(var as i32);
                    ok = solver.propagate(mark);
                    break;
                }
            }
        }
    }
}

/// Evaluates every clause under a full assignment.
pub fn satisfies(cnf: &Cnf, model: &[bool]) -> bool {
    cnf.clauses.iter().all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(cnf: &Cnf) -> Option<Vec<bool>> {
        // Lexicographic with variable 1 most significant, false before true.
        for bits in 0u32..(1 << cnf.num_vars) {
            let mut model = vec![false; cnf.num_vars + 1];
            for v in 1..=cnf.num_vars {
                model[v] = bits >> (cnf.num_vars - v) & 1 == 1;
            }
            if satisfies(cnf, &model) {
                return Some(model);
            }
        }
        None
    }

    #[test]
    fn agrees_with_brute_force_on_small_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let mut cnf = Cnf::new(n);
            for _ in 0..rng.gen_range(0..20) {
                let len = rng.gen_range(1..=3);
                let clause = (0..len)
                    .map(|_| {
                        let v = rng.gen_range(1..=n) as i32;
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                cnf.add(clause);
            }
            let got = solve(&cnf);
            assert_eq!(got, brute(&cnf), "{:?}", cnf.clauses);
        }
    }
}
