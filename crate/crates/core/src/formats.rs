//! Line-oriented text formats.
//!
//! Every file opens with a header `<kind> v1 key=value ...`; the `v1` token is
//! optional on input. Vector files follow with one 0/1 row per vector, A
//! block first. Certificates and reports are `key=value` lines. Lines starting
//! with `#` are ignored. Errors carry 1-based line numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;

use crate::bits::BitVector;
use crate::cp_reduction::{CPInstance, Metric, OVInstance, ReductionCert};
use crate::edit_reduction::{EmbeddingReport, GadgetMode, OrderingCheck, PairRow};
use crate::error::{Error, Result};
use crate::solvers::SolveResult;

pub const VERSION: &str = "v1";

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

struct Header {
    line: usize,
    fields: BTreeMap<String, String>,
}

impl Header {
    fn parse(kind: &str, line: usize, text: &str) -> Result<Self> {
        let mut toks = text.split_whitespace();
        if toks.next() != Some(kind) {
            return Err(Error::parse(line, format!("expected `{kind}` header")));
        }
        let mut fields = BTreeMap::new();
        for tok in toks {
            if tok == VERSION {
                continue;
            }
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(line, format!("malformed header field {tok:?}")))?;
            fields.insert(k.to_string(), v.to_string());
        }
        Ok(Header { line, fields })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self
            .fields
            .get(key)
            .ok_or_else(|| Error::parse(self.line, format!("missing `{key}`")))?;
        raw.parse()
            .map_err(|_| Error::parse(self.line, format!("bad value {raw:?} for `{key}`")))
    }
}

fn parse_row(line: usize, text: &str, len: usize) -> Result<BitVector> {
    let v = BitVector::parse(text).map_err(|e| match e {
        Error::Precondition(msg) => Error::parse(line, msg),
        other => Error::parse(line, other.to_string()),
    })?;
    if v.len() != len {
        return Err(Error::parse(line, format!("row has {} bits, expected {len}", v.len())));
    }
    Ok(v)
}

fn read_rows<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    count: usize,
    len: usize,
    last_line: &mut usize,
) -> Result<Vec<BitVector>> {
    (0..count)
        .map(|_| {
            let (ln, text) = it
                .next()
                .ok_or_else(|| Error::parse(*last_line + 1, "unexpected end of file"))?;
            *last_line = ln;
            parse_row(ln, text, len)
        })
        .collect()
}

fn push_rows(out: &mut String, rows: &[BitVector]) {
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
}

pub fn write_ov(ov: &OVInstance) -> String {
    let mut s = format!("ov {VERSION} m={} nA={} nB={}\n", ov.m, ov.a.len(), ov.b.len());
    push_rows(&mut s, &ov.a);
    push_rows(&mut s, &ov.b);
    s
}

pub fn read_ov(text: &str) -> Result<OVInstance> {
    let mut it = lines(text);
    let (ln, h) = it.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let h = Header::parse("ov", ln, h)?;
    let (m, na, nb): (usize, usize, usize) = (h.get("m")?, h.get("nA")?, h.get("nB")?);
    let mut last = ln;
    let a = read_rows(&mut it, na, m, &mut last)?;
    let b = read_rows(&mut it, nb, m, &mut last)?;
    if let Some((extra, _)) = it.next() {
        return Err(Error::parse(extra, "trailing rows after the B block"));
    }
    OVInstance::new(m, a, b)
}

pub fn write_cp(cp: &CPInstance) -> String {
    let mut s = format!(
        "cp {VERSION} d={} metric={} nA={} nB={} prov={}\n",
        cp.d,
        cp.metric,
        cp.a.len(),
        cp.b.len(),
        cp.provenance
    );
    push_rows(&mut s, &cp.a);
    push_rows(&mut s, &cp.b);
    s
}

pub fn read_cp(text: &str) -> Result<CPInstance> {
    let mut it = lines(text);
    let (ln, h) = it.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let h = Header::parse("cp", ln, h)?;
    let (d, na, nb): (usize, usize, usize) = (h.get("d")?, h.get("nA")?, h.get("nB")?);
    let metric: Metric = h.get::<String>("metric")?.parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?;
    let prov = h.fields.get("prov").cloned().unwrap_or_default();
    let mut last = ln;
    let a = read_rows(&mut it, na, d, &mut last)?;
    let b = read_rows(&mut it, nb, d, &mut last)?;
    if let Some((extra, _)) = it.next() {
        return Err(Error::parse(extra, "trailing rows after the B block"));
    }
    CPInstance::new(d, metric, a, b, &prov)
}

/// key=value body after a one-line header.
struct Kv {
    map: BTreeMap<String, (usize, String)>,
}

impl Kv {
    fn parse<'a>(it: impl Iterator<Item = (usize, &'a str)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (ln, text) in it {
            let (k, v) = text
                .split_once('=')
                .ok_or_else(|| Error::parse(ln, format!("expected key=value, got {text:?}")))?;
            if map.insert(k.to_string(), (ln, v.to_string())).is_some() {
                return Err(Error::parse(ln, format!("duplicate key `{k}`")));
            }
        }
        Ok(Kv { map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let (ln, raw) = self
            .map
            .get(key)
            .ok_or_else(|| Error::parse(0, format!("missing key `{key}`")))?;
        raw.parse()
            .map_err(|_| Error::parse(*ln, format!("bad value {raw:?} for `{key}`")))
    }
}

pub fn write_cert(c: &ReductionCert) -> String {
    let mut s = format!("cert {VERSION}\n");
    let kv: [(&str, String); 21] = [
        ("T", c.t.to_string()),
        ("Tprime", c.t_prime.to_string()),
        ("R", c.seeds.to_string()),
        ("r", c.reps.to_string()),
        ("M", c.merlin.to_string()),
        ("D_yes", c.d_yes.to_string()),
        ("D_no", c.d_no.to_string()),
        ("gap_num", c.gap.numer().to_string()),
        ("gap_den", c.gap.denom().to_string()),
        ("d", c.dimension.to_string()),
        ("backend", c.backend.clone()),
        ("p", c.p.to_string()),
        ("e", c.e.to_string()),
        ("n", c.n.to_string()),
        ("k", c.k.to_string()),
        ("m", c.m.to_string()),
        ("mB", c.block_size.to_string()),
        ("nA", c.n_a.to_string()),
        ("nB", c.n_b.to_string()),
        ("bob_order", c.bob_order.clone()),
        ("seed", c.seed.to_string()),
    ];
    for (k, v) in kv {
        let _ = writeln!(s, "{k}={v}");
    }
    s
}

pub fn read_cert(text: &str) -> Result<ReductionCert> {
    let mut it = lines(text);
    let (ln, h) = it.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    Header::parse("cert", ln, h)?;
    let kv = Kv::parse(it)?;
    let (num, den): (u128, u128) = (kv.get("gap_num")?, kv.get("gap_den")?);
    if den == 0 {
        return Err(Error::parse(0, "gap_den is zero"));
    }
    Ok(ReductionCert {
        t: kv.get("T")?,
        t_prime: kv.get("Tprime")?,
        seeds: kv.get("R")?,
        reps: kv.get("r")?,
        merlin: kv.get("M")?,
        d_yes: kv.get("D_yes")?,
        d_no: kv.get("D_no")?,
        gap: Ratio::new(num, den),
        dimension: kv.get("d")?,
        backend: kv.get("backend")?,
        p: kv.get("p")?,
        e: kv.get("e")?,
        n: kv.get("n")?,
        k: kv.get("k")?,
        m: kv.get("m")?,
        block_size: kv.get("mB")?,
        n_a: kv.get("nA")?,
        n_b: kv.get("nB")?,
        bob_order: kv.get("bob_order")?,
        seed: kv.get("seed")?,
    })
}

pub fn write_solve(r: &SolveResult) -> String {
    format!(
        "metric={}\nvalue={}\na={}\nb={}\nvisited={}\ntie_break=lowest_a_then_b\n",
        r.metric, r.value, r.a, r.b, r.visited
    )
}

fn mode_from_tag(s: &str) -> Option<GadgetMode> {
    if s == "uniform" {
        return Some(GadgetMode::Uniform);
    }
    s.strip_prefix("kwise(")?
        .strip_suffix(')')?
        .parse()
        .ok()
        .map(GadgetMode::KWise)
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "na",
    }
}

fn parse_opt_bool(s: &str) -> Option<Option<bool>> {
    match s {
        "yes" => Some(Some(true)),
        "no" => Some(Some(false)),
        "na" => Some(None),
        _ => None,
    }
}

fn write_ordering(s: &mut String, prefix: &str, o: &OrderingCheck) {
    let _ = writeln!(s, "{prefix}_tau={}", o.tau);
    let _ = writeln!(s, "{prefix}_threshold={}", o.threshold);
    let _ = writeln!(s, "{prefix}_qualifies={}", o.qualifies);
    let _ = writeln!(s, "{prefix}_holds={}", opt_bool(o.holds));
}

/// Report keys, then a `pairs` line and a TSV table.
pub fn write_embedding_report(r: &EmbeddingReport) -> String {
    let mut s = format!("embedding {VERSION}\n");
    let pair = |p: (usize, usize)| format!("{},{}", p.0, p.1);
    let kv: Vec<(&str, String)> = vec![
        ("d_h", r.d_h.to_string()),
        ("d_prime", r.d_prime.to_string()),
        ("d", r.d.to_string()),
        ("mode", r.mode.tag()),
        ("seed", r.seed.to_string()),
        ("lambda_hat", r.lambda_hat.to_string()),
        ("lambda_stderr", r.lambda_stderr.to_string()),
        ("lambda_samples", r.lambda_samples.to_string()),
        ("tau", r.tau.to_string()),
        ("tau_hat", r.tau_hat.to_string()),
        ("mean_deviation", r.mean_deviation.to_string()),
        ("violations", r.violations.len().to_string()),
        ("flagged", r.flagged().to_string()),
        ("upper_bound_ok", r.upper_bound_ok.to_string()),
        ("hamming_argmin", pair(r.hamming_argmin)),
        ("edit_argmin", pair(r.edit_argmin)),
        (
            "runner_up_margin",
            r.runner_up_margin.map_or("na".into(), |m| m.to_string()),
        ),
    ];
    for (k, v) in kv {
        let _ = writeln!(s, "{k}={v}");
    }
    for (a, b) in &r.violations {
        let _ = writeln!(s, "violation={a},{b}");
    }
    write_ordering(&mut s, "ordering", &r.ordering);
    write_ordering(&mut s, "ordering_observed", &r.ordering_observed);
    s.push_str("pairs\na\tb\thamming\tedit\n");
    for p in &r.pairs {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", p.a, p.b, p.hamming, p.edit);
    }
    s
}

pub fn read_embedding_report(text: &str) -> Result<EmbeddingReport> {
    let all: Vec<(usize, &str)> = lines(text).collect();
    let (ln, h) = *all.first().ok_or_else(|| Error::parse(1, "empty file"))?;
    Header::parse("embedding", ln, h)?;
    let split = all
        .iter()
        .position(|(_, l)| *l == "pairs")
        .ok_or_else(|| Error::parse(ln, "missing `pairs` table"))?;
    let mut violations = Vec::new();
    let mut body = Vec::new();
    let parse_pair = |ln: usize, v: &str| -> Result<(usize, usize)> {
        v.split_once(',')
            .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
            .ok_or_else(|| Error::parse(ln, format!("bad pair {v:?}")))
    };
    for &(ln, l) in &all[1..split] {
        if let Some(v) = l.strip_prefix("violation=") {
            violations.push(parse_pair(ln, v)?);
        } else {
            body.push((ln, l));
        }
    }
    let kv = Kv::parse(body.into_iter())?;
    let get_pair = |key: &str| -> Result<(usize, usize)> {
        let (ln, raw) = kv.map.get(key).ok_or_else(|| Error::parse(0, format!("missing key `{key}`")))?;
        parse_pair(*ln, raw)
    };
    let ordering = |prefix: &str| -> Result<OrderingCheck> {
        let holds: String = kv.get(&format!("{prefix}_holds"))?;
        Ok(OrderingCheck {
            tau: kv.get(&format!("{prefix}_tau"))?,
            threshold: kv.get(&format!("{prefix}_threshold"))?,
            qualifies: kv.get(&format!("{prefix}_qualifies"))?,
            holds: parse_opt_bool(&holds).ok_or_else(|| Error::parse(0, format!("bad holds value {holds:?}")))?,
        })
    };
    let mode: String = kv.get("mode")?;
    let margin: String = kv.get("runner_up_margin")?;
    let mut pairs = Vec::new();
    let mut rows = all[split + 1..].iter();
    match rows.next() {
        Some((_, "a\tb\thamming\tedit")) => {}
        Some((ln, _)) => return Err(Error::parse(*ln, "bad pair table header")),
        None => return Err(Error::parse(all[split].0 + 1, "missing pair table header")),
    }
    for &(ln, l) in rows {
        let f: Vec<usize> = l
            .split('\t')
            .map(|x| x.parse().map_err(|_| Error::parse(ln, format!("bad table cell {x:?}"))))
            .collect::<Result<_>>()?;
        if f.len() != 4 {
            return Err(Error::parse(ln, "pair rows have four columns"));
        }
        pairs.push(PairRow {
            a: f[0],
            b: f[1],
            hamming: f[2],
            edit: f[3],
        });
    }
    Ok(EmbeddingReport {
        d_h: kv.get("d_h")?,
        d_prime: kv.get("d_prime")?,
        d: kv.get("d")?,
        mode: mode_from_tag(&mode).ok_or_else(|| Error::parse(0, format!("bad mode {mode:?}")))?,
        seed: kv.get("seed")?,
        lambda_hat: kv.get("lambda_hat")?,
        lambda_stderr: kv.get("lambda_stderr")?,
        lambda_samples: kv.get("lambda_samples")?,
        tau: kv.get("tau")?,
        pairs,
        tau_hat: kv.get("tau_hat")?,
        mean_deviation: kv.get("mean_deviation")?,
        violations,
        upper_bound_ok: kv.get("upper_bound_ok")?,
        hamming_argmin: get_pair("hamming_argmin")?,
        edit_argmin: get_pair("edit_argmin")?,
        runner_up_margin: if margin == "na" {
            None
        } else {
            Some(margin.parse().map_err(|_| Error::parse(0, "bad runner_up_margin"))?)
        },
        ordering: ordering("ordering")?,
        ordering_observed: ordering("ordering_observed")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit_reduction::{reduce_hamming_to_edit, EmbedConfig};
    use crate::instances::{gen_ov, Force, OvGenConfig};

    #[test]
    fn ov_round_trip() {
        let ov = gen_ov(&OvGenConfig::new(7, 3, 4, Force::Any, 1)).unwrap();
        let text = write_ov(&ov);
        assert!(text.starts_with("ov v1 m=7 nA=3 nB=4\n"));
        assert_eq!(read_ov(&text).unwrap(), ov);
        // version token is optional
        assert_eq!(read_ov(&text.replacen(" v1", "", 1)).unwrap(), ov);
    }

    #[test]
    fn parse_errors_name_lines() {
        let bad = "ov v1 m=3 nA=1 nB=1\n101\n1x1\n";
        assert_eq!(read_ov(bad).unwrap_err(), Error::parse(3, "invalid bit character 'x' at column 2"));
        let short = "ov v1 m=3 nA=1 nB=1\n101\n";
        assert!(matches!(read_ov(short), Err(Error::Parse { line: 3, .. })));
        let wrong_len = "ov v1 m=3 nA=1 nB=1\n101\n11\n";
        assert!(matches!(read_ov(wrong_len), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read_ov("cp d=1\n"), Err(Error::Parse { line: 1, .. })));
        let trailing = "ov m=1 nA=1 nB=1\n1\n0\n1\n";
        assert!(matches!(read_ov(trailing), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn cp_round_trip() {
        let ov = gen_ov(&OvGenConfig::new(5, 2, 3, Force::Any, 2)).unwrap();
        for metric in [Metric::Hamming, Metric::Lp(3), Metric::Edit] {
            let cp = CPInstance::new(5, metric, ov.a.clone(), ov.b.clone(), "unit").unwrap();
            assert_eq!(read_cp(&write_cp(&cp)).unwrap(), cp);
        }
    }

    #[test]
    fn cert_round_trip() {
        use crate::cp_reduction::reduce_with;
        use crate::protocol::{CodeChoice, FieldPolicy, ProtocolParams};
        let p = ProtocolParams::ma(4, 2, &CodeChoice::ReedSolomon(FieldPolicy::Smallest), None).unwrap();
        let ov = gen_ov(&OvGenConfig::new(4, 2, 2, Force::Yes, 3)).unwrap();
        let (_, cert) = reduce_with(&ov, &p, &Default::default(), 77).unwrap();
        let text = write_cert(&cert);
        assert!(text.contains("\nTprime=25\n"));
        assert_eq!(read_cert(&text).unwrap(), cert);
        assert!(matches!(read_cert("cert v1\nT=2\nT=3\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn report_round_trip() {
        let ov = gen_ov(&OvGenConfig::new(8, 3, 3, Force::Any, 4)).unwrap();
        let cp = CPInstance::new(8, Metric::Hamming, ov.a, ov.b, "x").unwrap();
        let (_, rep) = reduce_hamming_to_edit(&cp, &EmbedConfig { tau: 0.01, ..EmbedConfig::default() }).unwrap();
        let text = write_embedding_report(&rep);
        assert_eq!(read_embedding_report(&text).unwrap(), rep);
    }
}
