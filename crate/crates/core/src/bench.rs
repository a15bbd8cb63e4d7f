//! Benchmark instances, method runs with mandatory verification, and
//! CSV/JSON/gain-table reports.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{naive_synthesis, realize, CliffordCircuit, Metrics};
use crate::error::{Error, Result};
use crate::ordered::synth_ordered;
use crate::pauli::{read_pauli_file, PauliEntry, PauliLetter, PauliOperator, PauliTable, Sign};
use crate::synth::{synthesize, Mode};
use crate::verify::{is_ordered_pauli_network, is_pauli_network};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    File,
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub num_qubits: usize,
    pub operators: Vec<PauliOperator>,
    pub angles: Option<Vec<f64>>,
    pub kind: InstanceKind,
}

impl Instance {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Angles, or zeros when none were given.
    pub fn angles_or_zero(&self) -> Vec<f64> {
        self.angles.clone().unwrap_or_else(|| vec![0.0; self.operators.len()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportDistribution {
    /// Each letter uniform over `{I, X, Y, Z}`; identities are redrawn.
    Uniform,
    /// Exactly `w` qubits chosen uniformly, each carrying X, Y or Z.
    Fixed(usize),
}

pub fn random_instance(n: usize, m: usize, seed: u64, dist: SupportDistribution) -> Result<Instance> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid(format!("random instance needs n >= 1 and m >= 1 (got n={n}, m={m})")));
    }
    if let SupportDistribution::Fixed(w) = dist {
        if w == 0 || w > n {
            return Err(Error::Invalid(format!("fixed support {w} outside 1..={n}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let operators = (0..m)
        .map(|_| match dist {
            SupportDistribution::Uniform => loop {
                let letters: Vec<PauliLetter> = (0..n).map(|_| PauliLetter::ALL[rng.gen_range(0..4)]).collect();
                let op = PauliOperator::from_letters(&letters, Sign::Plus);
                if !op.is_identity() {
                    break op;
                }
            },
            SupportDistribution::Fixed(w) => {
                let mut op = PauliOperator::identity(n);
                for q in sample(&mut rng, n, w) {
                    op.set_letter(q, PauliLetter::ALL[rng.gen_range(1..4)]);
                }
                op
            }
        })
        .collect();
    Ok(Instance {
        name: format!("random_n{n}_m{m}_s{seed}"),
        num_qubits: n,
        operators,
        angles: None,
        kind: InstanceKind::Random,
    })
}

/// Operators and angles from parsed entries. Angles must be given on every
/// line or on none.
pub fn split_entries(entries: Vec<PauliEntry>) -> Result<(Vec<PauliOperator>, Option<Vec<f64>>)> {
    let with_angle = entries.iter().filter(|e| e.angle.is_some()).count();
    if with_angle != 0 && with_angle != entries.len() {
        return Err(Error::Invalid("angles must be given for every operator or for none".into()));
    }
    let angles = (with_angle > 0).then(|| entries.iter().map(|e| e.angle.unwrap()).collect());
    Ok((entries.into_iter().map(|e| e.operator).collect(), angles))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let file = std::fs::File::open(path)?;
    let (operators, angles) = split_entries(read_pauli_file(std::io::BufReader::new(file))?)?;
    if operators.is_empty() {
        return Err(Error::Invalid(format!("{}: no operators", path.display())));
    }
    Ok(Instance {
        name: path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
        num_qubits: operators[0].num_qubits(),
        operators,
        angles,
        kind: InstanceKind::File,
    })
}

/// Every non-hidden regular file in `dir`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<Instance>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file() && !p.file_name().is_some_and(|f| f.to_string_lossy().starts_with('.')));
    paths.sort();
    paths.iter().map(|p| load_instance(p)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    RCount,
    RDepth,
    RCountOrdered,
    RDepthOrdered,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Naive,
        Method::RCount,
        Method::RDepth,
        Method::RCountOrdered,
        Method::RDepthOrdered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::RCount => "rcount",
            Method::RDepth => "rdepth",
            Method::RCountOrdered => "rcount-ordered",
            Method::RDepthOrdered => "rdepth-ordered",
        }
    }

    pub fn parse_list(list: &str) -> Result<Vec<Method>> {
        list.split(',').map(|s| s.trim().parse()).collect()
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown method {s:?}")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Synthesizes with `method` and verifies the result. Synthesized methods
/// report the network with rotations inserted; the closing Clifford is not
/// counted.
pub fn run_method(instance: &Instance, method: Method) -> Result<CliffordCircuit> {
    let angles = instance.angles_or_zero();
    let fail = |what: &str| Error::Verification(format!("{} on {}: {what}", method, instance.name));
    let table = PauliTable::from_operators(&instance.operators)?;
    let circuit = match method {
        Method::Naive => {
            let rotations: Vec<(PauliOperator, f64)> = instance
                .operators
                .iter()
                .cloned()
                .zip(angles)
                .filter(|(p, _)| !p.is_identity())
                .collect();
            let circuit = naive_synthesis(&rotations)?;
            if !is_ordered_pauli_network(&circuit.without_rotations(), &table)?.0 {
                return Err(fail("ladder circuit is not an ordered Pauli network"));
            }
            circuit
        }
        Method::RCount | Method::RDepth | Method::RCountOrdered | Method::RDepthOrdered => {
            let mode = if matches!(method, Method::RCount | Method::RCountOrdered) {
                Mode::Count
            } else {
                Mode::Depth
            };
            let ordered = matches!(method, Method::RCountOrdered | Method::RDepthOrdered);
            let result = if ordered {
                synth_ordered(&table, mode)
            } else {
                synthesize(&table, mode)
            };
            if result.placements.len() != table.len() {
                return Err(fail("not every rotation was placed"));
            }
            let network = result.network_circuit();
            let valid = if ordered {
                is_ordered_pauli_network(&network, &table)?.0
            } else {
                is_pauli_network(&network, &table)?.0
            };
            if !valid {
                return Err(fail("output is not a Pauli network"));
            }
            realize(&result, &angles)?
        }
    };
    Ok(circuit)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub method: String,
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<Row>,
}

/// Worker count from `PAULI_FORGE_THREADS`; 0 or unset means automatic.
pub fn thread_count() -> usize {
    std::env::var("PAULI_FORGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs every method on every instance in parallel. Rows come out in
/// instance-major, method-minor order. Seconds are 0 when `timing` is off.
pub fn run_suite(instances: &[Instance], methods: &[Method], timing: bool) -> Result<Report> {
    let jobs: Vec<(&Instance, Method)> = instances
        .iter()
        .flat_map(|i| methods.iter().map(move |&m| (i, m)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(instance, method)| {
                let start = Instant::now();
                let circuit = run_method(instance, method)?;
                let seconds = if timing { start.elapsed().as_secs_f64() } else { 0.0 };
                let metrics = Metrics::of(&circuit);
                log::info!(
                    "{} {}: count {} depth {} in {:.3}s",
                    instance.name,
                    method,
                    metrics.cnot_count,
                    metrics.cnot_depth,
                    seconds
                );
                Ok(Row {
                    instance: instance.name.clone(),
                    n: instance.num_qubits,
                    m: instance.len(),
                    method: method.name().to_string(),
                    cnot_count: metrics.cnot_count,
                    cnot_depth: metrics.cnot_depth,
                    seconds,
                })
            })
            .collect::<Result<Vec<Row>>>()
    })?;
    Ok(Report { rows })
}

/// Relative change versus the baseline, truncated toward zero to one
/// decimal: `(12, 38)` gives `-68.4%`.
pub fn format_gain(value: usize, naive: usize) -> String {
    if naive == 0 {
        return "n/a".to_string();
    }
    let permille = (value as i128 - naive as i128) * 1000 / naive as i128;
    let sign = match permille.signum() {
        -1 => "-",
        1 => "+",
        _ => "",
    };
    let abs = permille.abs();
    format!("{sign}{}.{}%", abs / 10, abs % 10)
}

impl Report {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.rows)?)
    }

    /// One line per instance and metric: the naive value followed by the
    /// gain of every other method present.
    pub fn gains_table(&self) -> String {
        let mut instances: Vec<&str> = Vec::new();
        let mut methods: Vec<&str> = Vec::new();
        for row in &self.rows {
            if !instances.contains(&row.instance.as_str()) {
                instances.push(&row.instance);
            }
            if row.method != "naive" && !methods.contains(&row.method.as_str()) {
                methods.push(&row.method);
            }
        }
        let mut out = String::from("instance,metric,naive");
        for m in &methods {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        let find = |inst: &str, method: &str| self.rows.iter().find(|r| r.instance == inst && r.method == method);
        for inst in instances {
            let Some(naive) = find(inst, "naive") else { continue };
            for (metric, get) in [
                ("cnot_count", (|r: &Row| r.cnot_count) as fn(&Row) -> usize),
                ("cnot_depth", |r: &Row| r.cnot_depth),
            ] {
                out.push_str(&format!("{inst},{metric},{}", get(naive)));
                for m in &methods {
                    out.push(',');
                    if let Some(row) = find(inst, m) {
                        out.push_str(&format_gain(get(row), get(naive)));
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Instance {
        Instance {
            name: "zz".into(),
            num_qubits: 2,
            operators: vec!["ZZ".parse().unwrap()],
            angles: None,
            kind: InstanceKind::File,
        }
    }

    #[test]
    fn random_instances() {
        let a = random_instance(2, 3, 7, SupportDistribution::Uniform).unwrap();
        let b = random_instance(2, 3, 7, SupportDistribution::Uniform).unwrap();
        assert_eq!(a, b);
        assert!(a.operators.iter().all(|p| !p.is_identity()));
        let f = random_instance(6, 50, 1, SupportDistribution::Fixed(2)).unwrap();
        assert!(f.operators.iter().all(|p| p.support_size() == 2));
        assert!(random_instance(2, 0, 7, SupportDistribution::Uniform).is_err());
        assert!(random_instance(2, 1, 7, SupportDistribution::Fixed(3)).is_err());
    }

    #[test]
    fn zz_metrics() {
        let r = run_suite(&[zz()], &[Method::Naive, Method::RCount, Method::RDepth], false).unwrap();
        let get = |m: &str| r.rows.iter().find(|row| row.method == m).unwrap();
        assert_eq!((get("naive").cnot_count, get("naive").cnot_depth), (2, 2));
        assert_eq!(get("rcount").cnot_count, 1);
        assert_eq!(get("rdepth").cnot_count, 1);
    }

    #[test]
    fn sparse_instances_can_lose_to_naive() {
        // The network is never uncomputed, so low-weight rotations on many
        // qubits get spread by earlier CNOTs.
        let inst = random_instance(16, 120, 11, SupportDistribution::Fixed(2)).unwrap();
        let r = run_suite(&[inst], &[Method::Naive, Method::RCount], false).unwrap();
        assert_eq!(r.rows[0].cnot_count, 240);
        assert!(r.rows[1].cnot_count > 240);
    }

    #[test]
    fn gain_formatting() {
        assert_eq!(format_gain(12, 38), "-68.4%");
        assert_eq!(format_gain(24, 38), "-36.8%");
        assert_eq!(format_gain(16, 38), "-57.8%");
        assert_eq!(format_gain(10, 38), "-73.6%");
        assert_eq!(format_gain(38, 38), "0.0%");
        assert_eq!(format_gain(11, 10), "+10.0%");
        assert_eq!(format_gain(99_999, 100_000), "0.0%");
        assert_eq!(format_gain(1, 0), "n/a");
    }

    #[test]
    fn methods_parse() {
        assert_eq!(
            Method::parse_list("naive,rcount-ordered").unwrap(),
            vec![Method::Naive, Method::RCountOrdered]
        );
        assert!(Method::parse_list("naive,walrus").is_err());
    }

    #[test]
    fn csv_and_json() {
        let r = run_suite(&[zz()], &[Method::Naive, Method::RCount], false).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance,n,m,method,cnot_count,cnot_depth,seconds\nzz,2,1,naive,2,2,0.0\nzz,2,1,rcount,1,1,0.0\n"
        );
        let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json[1]["method"], "rcount");
        assert_eq!(
            r.gains_table(),
            "instance,metric,naive,rcount\nzz,cnot_count,2,-50.0%\nzz,cnot_depth,2,-50.0%\n"
        );
    }
}
