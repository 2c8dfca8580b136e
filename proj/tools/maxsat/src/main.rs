//! Exact weighted-1 MAX-SAT solver: linear search over the cost bound with a
//! sequential-counter cardinality constraint on soft-clause relaxation
//! variables, using varisat for each SAT call. Reads WCNF in both the legacy
//! `p wcnf` header style and the newer `h`-prefixed style; prints the usual
//! `o` / `s OPTIMUM FOUND` / `v` lines.

use std::env;
use std::fs;
use std::process::ExitCode;

use varisat::{ExtendFormula, Lit, Solver};

struct Instance {
    num_vars: usize,
    hard: Vec<Vec<i64>>,
    soft: Vec<Vec<i64>>, // every soft clause has weight 1
}

fn parse_wcnf(text: &str) -> Result<Instance, String> {
    let mut inst = Instance { num_vars: 0, hard: Vec::new(), soft: Vec::new() };
    let mut top: Option<i64> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |msg: &str| format!("line {}: {}", lineno + 1, msg);
        if let Some(rest) = line.strip_prefix("p ") {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.first() != Some(&"wcnf") {
                return Err(err("expected wcnf header"));
            }
            if let Some(v) = fields.get(1) {
                inst.num_vars = v.parse().map_err(|_| err("bad variable count"))?;
            }
            if let Some(t) = fields.get(3) {
                top = Some(t.parse().map_err(|_| err("bad top weight"))?);
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap();
        let hard = first == "h";
        let weight: i64 = if hard { 1 } else { first.parse().map_err(|_| err("bad weight"))? };
        let mut lits = Vec::new();
        let mut terminated = false;
        for tok in tokens {
            let lit: i64 = tok.parse().map_err(|_| err("bad literal"))?;
            if lit == 0 {
                terminated = true;
                break;
            }
            inst.num_vars = inst.num_vars.max(lit.unsigned_abs() as usize);
            lits.push(lit);
        }
        if !terminated {
            return Err(err("clause not terminated by 0"));
        }
        if hard || Some(weight) == top {
            inst.hard.push(lits);
        } else if weight == 1 {
            inst.soft.push(lits);
        } else {
            return Err(err("only unit soft weights are supported"));
        }
    }
    if inst.hard.is_empty() && inst.soft.is_empty() {
        return Err("no clauses".to_string());
    }
    Ok(inst)
}

fn lit(l: i64) -> Lit {
    Lit::from_dimacs(l as isize)
}

/// Adds "at most k of `vars` are true" with fresh counter variables starting
/// at `next_var` (1-based ids). Returns the next free variable id.
fn at_most_k(solver: &mut Solver, vars: &[i64], k: usize, mut next_var: i64) -> i64 {
    if k == 0 {
        for &v in vars {
            solver.add_clause(&[lit(-v)]);
        }
        return next_var;
    }
    if vars.len() <= k {
        return next_var;
    }
    // s[i][j]: among the first i+1 vars at least j+1 are true
    let mut prev: Vec<i64> = Vec::new();
    for (i, &v) in vars.iter().enumerate() {
        let width = k.min(i + 1);
        let row: Vec<i64> = (0..width)
            .map(|_| {
                next_var += 1;
                next_var
            })
            .collect();
        solver.add_clause(&[lit(-v), lit(row[0])]);
        for (j, &s) in prev.iter().enumerate() {
            solver.add_clause(&[lit(-s), lit(row[j])]);
            if j + 1 < width {
                solver.add_clause(&[lit(-v), lit(-s), lit(row[j + 1])]);
            }
        }
        if i >= k {
            solver.add_clause(&[lit(-v), lit(-prev[k - 1])]);
        }
        prev = row;
    }
    next_var
}

fn solve_with_bound(inst: &Instance, k: usize) -> Option<Vec<bool>> {
    let mut solver = Solver::new();
    for clause in &inst.hard {
        let c: Vec<Lit> = clause.iter().map(|&l| lit(l)).collect();
        solver.add_clause(&c);
    }
    let mut next_var = inst.num_vars as i64;
    let mut relax = Vec::new();
    for clause in &inst.soft {
        next_var += 1;
        relax.push(next_var);
        let mut c: Vec<Lit> = clause.iter().map(|&l| lit(l)).collect();
        c.push(lit(next_var));
        solver.add_clause(&c);
    }
    at_most_k(&mut solver, &relax, k, next_var);
    match solver.solve() {
        Ok(true) => {
            let model = solver.model().expect("sat without model");
            let mut values = vec![false; inst.num_vars + 1];
            for l in model {
                let v = l.to_dimacs();
                if v.unsigned_abs() <= inst.num_vars {
                    values[v.unsigned_abs()] = v > 0;
                }
            }
            Some(values)
        }
        Ok(false) => None,
        Err(e) => panic!("solver error: {}", e),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = env::args().collect();
    if args.len() != 2 {
        eprintln!("usage: {} <instance.wcnf>", args[0]);
        return ExitCode::from(2);
    }
    let text = match fs::read_to_string(&args[1]) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {}", args[1], e);
            return ExitCode::from(2);
        }
    };
    let inst = match parse_wcnf(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("parse error: {}", e);
            return ExitCode::from(2);
        }
    };

    for k in 0..=inst.soft.len() {
        if let Some(values) = solve_with_bound(&inst, k) {
            println!("o {}", k);
            println!("s OPTIMUM FOUND");
            let mut line = String::from("v");
            for v in 1..=inst.num_vars {
                line.push(' ');
                if !values[v] {
                    line.push('-');
                }
                line.push_str(&v.to_string());
            }
            line.push_str(" 0");
            println!("{}", line);
            return ExitCode::SUCCESS;
        }
        println!("c bound {} unsatisfiable", k);
    }
    println!("s UNSATISFIABLE");
    ExitCode::from(1)
}
