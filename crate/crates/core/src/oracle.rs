//! Exhaustive decision procedures for bounded instances, used as ground
//! truth in tests.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::infer::encode::build_signature;
use crate::infer::{
    find_fixed_point, FixedPointObservation, InferError, InferenceProblem, Sign,
    UpdateFunctionTable,
};
use crate::model::{eval_with, for_each_point, EvalError, FunctionTable, Model, Value};
use crate::spec::{ArgSpec, Direction, MonotonicitySpec};
use crate::term::{constants_of, symbols_of, Sort, Term, TermKind};

/// Default limit on candidate tables per variable (and on other search
/// spaces).
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what}: search space {} exceeds budget {budget}", show_size(*size))]
    Budget {
        what: String,
        size: u128,
        budget: u64,
    },
    #[error("`{0}` has an unbounded domain")]
    Unbounded(String),
    #[error("application outside the grid: {0}")]
    OutOfGrid(String),
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn show_size(size: u128) -> String {
    if size == u128::MAX {
        "of 2^128 or more".to_string()
    } else {
        size.to_string()
    }
}

fn check_budget(what: impl Into<String>, size: u128, budget: u64) -> Result<(), OracleError> {
    if size > budget as u128 {
        return Err(OracleError::Budget {
            what: what.into(),
            size,
            budget,
        });
    }
    Ok(())
}

fn space(domains: &[Vec<Value>]) -> u128 {
    domains
        .iter()
        .map(|d| d.len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn pow(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |a, _| a.saturating_mul(base as u128))
}

/// Every table over `arg_domains` with outputs in `out_domain` that is
/// monotone/anti-monotone per `spec` and depends on each position in
/// `essential` (1-based). Tables are output vectors in grid order (last
/// argument fastest), enumerated as a mixed-radix counter with the first
/// row most significant; a row is rejected as soon as it breaks monotonicity
/// against an already assigned neighbour.
pub fn enumerate_tables(
    arg_domains: &[Vec<Value>],
    out_domain: &[Value],
    spec: &ArgSpec,
    essential: &[usize],
    budget: u64,
) -> Result<Vec<Vec<Value>>, OracleError> {
    let rows = space(arg_domains) as usize;
    check_budget("candidate tables", pow(out_domain.len(), rows), budget)?;
    let arity = arg_domains.len();
    // Stride of each coordinate in the row index.
    let mut stride = vec![1usize; arity];
    for k in (0..arity.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * arg_domains[k + 1].len();
    }
    let coord = |row: usize, k: usize| (row / stride[k]) % arg_domains[k].len();
    let mut out = Vec::new();
    let mut table: Vec<usize> = vec![0; rows];
    fn go(
        row: usize,
        table: &mut Vec<usize>,
        ctx: &dyn Fn(&[usize], usize, usize) -> bool,
        n_out: usize,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if row == table.len() {
            emit(table);
            return;
        }
        for o in 0..n_out {
            table[row] = o;
            if ctx(table, row, o) {
                go(row + 1, table, ctx, n_out, emit);
            }
        }
    }
    let consistent = |table: &[usize], row: usize, o: usize| {
        (0..arity).all(|k| {
            if coord(row, k) == 0 {
                return true;
            }
            let lower = table[row - stride[k]];
            match spec.direction(k + 1) {
                Direction::Monotone => lower <= o,
                Direction::AntiMonotone => lower >= o,
                Direction::Free => true,
            }
        })
    };
    let depends = |table: &[usize], k: usize| {
        (0..rows).any(|r| coord(r, k) > 0 && table[r] != table[r - stride[k]])
    };
    go(0, &mut table, &consistent, out_domain.len(), &mut |t| {
        if essential.iter().all(|&k| depends(t, k - 1)) {
            out.push(t.iter().map(|&o| out_domain[o]).collect());
        }
    });
    Ok(out)
}

fn domain_of(p: &InferenceProblem, i: usize) -> Result<Vec<Value>, OracleError> {
    let v = &p.variables()[i];
    v.values()
        .ok_or_else(|| OracleError::Unbounded(v.name().to_string()))
}

/// Per-variable candidate tables of `p` (signs and essentiality only).
pub fn candidate_tables(
    p: &InferenceProblem,
    target: usize,
    budget: u64,
) -> Result<Vec<Vec<Value>>, OracleError> {
    let regs = p.regulators(target);
    let arg_domains = regs
        .iter()
        .map(|&r| domain_of(p, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut spec = ArgSpec::default();
    let mut essential = Vec::new();
    for (k, &r) in regs.iter().enumerate() {
        let reg = p.regulation(r, target).expect("regulator");
        match reg.sign {
            Sign::Monotone => {
                spec.monotone.insert(k + 1);
            }
            Sign::AntiMonotone => {
                spec.anti.insert(k + 1);
            }
            Sign::Unknown => {}
        }
        if reg.essential {
            essential.push(k + 1);
        }
    }
    enumerate_tables(
        &arg_domains,
        &domain_of(p, target)?,
        &spec,
        &essential,
        budget,
    )
}

/// Index of a full state's regulator values in the grid order of `target`.
struct RowIndex {
    regs: Vec<usize>,
    domains: Vec<Vec<Value>>,
}

impl RowIndex {
    fn new(p: &InferenceProblem, target: usize) -> Result<Self, OracleError> {
        let regs = p.regulators(target).to_vec();
        let domains = regs
            .iter()
            .map(|&r| domain_of(p, r))
            .collect::<Result<_, _>>()?;
        Ok(RowIndex { regs, domains })
    }

    fn row(&self, state: &[Value]) -> usize {
        self.regs.iter().zip(&self.domains).fold(0, |acc, (&r, d)| {
            acc * d.len() + d.iter().position(|v| *v == state[r]).unwrap()
        })
    }
}

fn to_tables(
    p: &InferenceProblem,
    chosen: &[&Vec<Value>],
) -> Result<Vec<UpdateFunctionTable>, OracleError> {
    let sig = build_signature(p);
    let mut tables = Vec::with_capacity(chosen.len());
    for (t, outs) in chosen.iter().enumerate() {
        let idx = RowIndex::new(p, t)?;
        let mut rows = BTreeMap::new();
        let mut i = 0;
        for_each_point::<()>(&idx.domains, &mut |x| {
            rows.insert(x.to_vec(), outs[i]);
            i += 1;
            Ok(true)
        })
        .unwrap();
        tables.push(UpdateFunctionTable {
            target: t,
            symbol: sig.symbols[t].clone(),
            regulators: idx.regs,
            rows,
        });
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Sat(Vec<UpdateFunctionTable>),
    Unsat,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Sat(_))
    }
}

fn states_of(
    p: &InferenceProblem,
    obs: &FixedPointObservation,
    budget: u64,
) -> Result<Vec<Vec<Value>>, OracleError> {
    let domains = (0..p.variables().len())
        .map(|i| match obs.assignments.get(&i) {
            Some(v) => Ok(vec![*v]),
            None => domain_of(p, i),
        })
        .collect::<Result<Vec<_>, _>>()?;
    check_budget(format!("states of `{}`", obs.name), space(&domains), budget)?;
    let mut states = Vec::new();
    for_each_point::<()>(&domains, &mut |x| {
        states.push(x.to_vec());
        Ok(true)
    })
    .unwrap();
    Ok(states)
}

/// Decides `p` by enumerating candidate tables per variable, then choosing
/// one full state per observation and keeping only candidates for which
/// every chosen state is a fixed point. Sat iff some choice leaves every
/// variable a candidate.
pub fn oracle_inference(p: &InferenceProblem, budget: u64) -> Result<OracleVerdict, OracleError> {
    let n = p.variables().len();
    let cands = (0..n)
        .map(|v| candidate_tables(p, v, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let index = (0..n)
        .map(|v| RowIndex::new(p, v))
        .collect::<Result<Vec<_>, _>>()?;
    let states = p
        .observations()
        .iter()
        .map(|o| states_of(p, o, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let alive: Vec<Vec<usize>> = cands.iter().map(|c| (0..c.len()).collect()).collect();

    fn go(
        j: usize,
        alive: &[Vec<usize>],
        states: &[Vec<Vec<Value>>],
        cands: &[Vec<Vec<Value>>],
        index: &[RowIndex],
    ) -> Option<Vec<usize>> {
        if alive.iter().any(Vec::is_empty) {
            return None;
        }
        if j == states.len() {
            return Some(alive.iter().map(|a| a[0]).collect());
        }
        for s in &states[j] {
            let next: Vec<Vec<usize>> = alive
                .iter()
                .enumerate()
                .map(|(v, a)| {
                    let row = index[v].row(s);
                    a.iter()
                        .copied()
                        .filter(|&c| cands[v][c][row] == s[v])
                        .collect()
                })
                .collect();
            if let Some(found) = go(j + 1, &next, states, cands, index) {
                return Some(found);
            }
        }
        None
    }

    match go(0, &alive, &states, &cands, &index) {
        None => Ok(OracleVerdict::Unsat),
        Some(choice) => {
            let chosen: Vec<&Vec<Value>> = choice
                .iter()
                .enumerate()
                .map(|(v, &c)| &cands[v][c])
                .collect();
            Ok(OracleVerdict::Sat(to_tables(p, &chosen)?))
        }
    }
}

/// Number of table combinations satisfying signs, essentiality and every
/// observation, enumerated combination by combination.
pub fn count_solutions(p: &InferenceProblem, budget: u64) -> Result<u64, OracleError> {
    let n = p.variables().len();
    let cands = (0..n)
        .map(|v| candidate_tables(p, v, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let combos = cands
        .iter()
        .map(|c| c.len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b));
    check_budget("table combinations", combos, budget)?;
    let index = (0..n)
        .map(|v| RowIndex::new(p, v))
        .collect::<Result<Vec<_>, _>>()?;
    if cands.iter().any(Vec::is_empty) {
        return Ok(0);
    }
    let mut choice = vec![0usize; n];
    let mut count = 0u64;
    loop {
        let next = |v: usize, s: &[Value]| cands[v][choice[v]][index[v].row(s)];
        let mut ok = true;
        for obs in p.observations() {
            if find_fixed_point(p, obs, &next)?.is_none() {
                ok = false;
                break;
            }
        }
        count += ok as u64;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(count);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < cands[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoSatVerdict {
    Sat(Model),
    Unsat,
}

impl MonoSatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, MonoSatVerdict::Sat(_))
    }
}

/// Decides `phi` under `spec` over finite structures: unbounded integer
/// sorts range over `lo..=hi`, bounded ones over their own bounds. Every
/// constant and every function table (total over the grid, monotone per
/// `spec`) is enumerated.
pub fn oracle_mono_sat(
    phi: &Term,
    spec: &MonotonicitySpec,
    grid: (i64, i64),
    budget: u64,
) -> Result<MonoSatVerdict, OracleError> {
    let dom = |s: &Sort| -> Vec<Value> {
        Value::domain(s).unwrap_or_else(|| (grid.0..=grid.1).map(Value::Int).collect())
    };
    let constants = constants_of(phi);
    let const_domains: Vec<Vec<Value>> = constants.iter().map(|(_, s)| dom(s)).collect();
    let symbols = symbols_of(phi);
    let empty = ArgSpec::default();
    let mut tables = Vec::with_capacity(symbols.len());
    let mut grids = Vec::with_capacity(symbols.len());
    for f in &symbols {
        let arg_domains: Vec<Vec<Value>> = f.arg_sorts().iter().map(dom).collect();
        let arg_spec = spec.get(f).unwrap_or(&empty);
        tables.push(enumerate_tables(
            &arg_domains,
            &dom(&f.result_sort()),
            arg_spec,
            &[],
            budget,
        )?);
        grids.push(arg_domains);
    }
    let total = space(&const_domains).saturating_mul(
        tables
            .iter()
            .map(|t| t.len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b)),
    );
    check_budget("structures", total, budget)?;
    if tables.iter().any(Vec::is_empty) {
        return Ok(MonoSatVerdict::Unsat);
    }

    let build = |consts: &[Value], choice: &[usize]| -> Model {
        let mut m = Model::new();
        for ((name, _), v) in constants.iter().zip(consts) {
            m.constants.insert(name.clone(), *v);
        }
        for (i, f) in symbols.iter().enumerate() {
            let outs = &tables[i][choice[i]];
            let mut t = FunctionTable::new(outs.first().copied().unwrap_or(Value::Int(0)));
            let mut r = 0;
            for_each_point::<()>(&grids[i], &mut |x| {
                t.points.insert(x.to_vec(), outs[r]);
                r += 1;
                Ok(true)
            })
            .unwrap();
            m.functions.insert(f.name_rc().clone(), t);
        }
        m
    };
    let eval = |m: &Model| -> Result<bool, OracleError> {
        let mut out_of_grid = None;
        let v = eval_with(
            phi,
            &mut |t| match t.kind() {
                TermKind::Const(name, _) => Some(Ok(m.constants[name])),
                _ => None,
            },
            &mut |f, args| {
                let table = &m.functions[f];
                match table.points.get(args) {
                    Some(v) => Ok(*v),
                    None => {
                        out_of_grid = Some(format!("{f}{args:?}"));
                        Ok(table.default)
                    }
                }
            },
        )?;
        if let Some(app) = out_of_grid {
            return Err(OracleError::OutOfGrid(app));
        }
        Ok(v == Value::Bool(true))
    };

    let mut found = None;
    for_each_point::<OracleError>(&const_domains, &mut |consts| {
        let mut choice = vec![0usize; symbols.len()];
        loop {
            let m = build(consts, &choice);
            if eval(&m)? {
                found = Some(m);
                return Ok(false);
            }
            let mut k = symbols.len();
            loop {
                if k == 0 {
                    return Ok(true);
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < tables[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    })?;
    Ok(match found {
        Some(m) => MonoSatVerdict::Sat(m),
        None => MonoSatVerdict::Unsat,
    })
}
