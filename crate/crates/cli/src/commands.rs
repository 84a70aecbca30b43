//! One function per subcommand. Each builds the JSON, CSV and text renderings
//! of its report plus a pass/anomaly status.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use ffmertens::chargroup::{characters, DirichletChar, ResidueRing};
use ffmertens::lfunc::{
    l_coeffs_with, reciprocal_zeros_with, rh_check_with, LReport, MonicHistograms, RingLData,
    ZeroRecord,
};
use ffmertens::mertens::{
    kappa_q, mertens_trajectory, rosen_log_product, unit_residue, ConstantReport, Methods,
    MertensPoint, ModulusContext, VerificationReport,
};
use ffmertens::polyring::{count_irreducibles, IrreducibleCache};
use ffmertens::{Exec, Field, FieldSpec, Poly, PolyRing};
use serde::Serialize;

use crate::config::{Command, Method, RunConfig};

/// A malformed request, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub struct Output {
    pub json: String,
    pub csv: Vec<u8>,
    pub text: String,
    /// False on a computational anomaly (exit status 1).
    pub pass: bool,
    pub warnings: Vec<String>,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(w.into_inner()?)
}

/// Environment variable naming a directory for irreducible caches.
pub const CACHE_ENV: &str = "FFMERTENS_CACHE_DIR";

pub struct Session {
    pub cfg: RunConfig,
    pub ring: PolyRing,
    cache_path: Option<PathBuf>,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Result<Session> {
        let field = match &cfg.field.modulus {
            Some(m) => {
                let (p, k) = prime_power(cfg.field.q)?;
                Field::from_spec(&FieldSpec {
                    p,
                    k,
                    modulus: m.clone(),
                })
            }
            None => Field::from_order(cfg.field.q),
        }
        .map_err(|e| usage(format!("field: {e}")))?;
        let exec = if cfg.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        };
        let cache_path = cfg.cache.clone().or_else(|| {
            std::env::var_os(CACHE_ENV).map(|dir| {
                let s = field.spec();
                PathBuf::from(dir).join(format!("irreducibles-{}-{}.txt", s.p, s.k))
            })
        });
        let cache = Arc::new(IrreducibleCache::default());
        if let Some(path) = &cache_path {
            cache
                .load(path, field.spec())
                .with_context(|| format!("loading cache {}", path.display()))?;
        }
        let ring = PolyRing::new(field)
            .with_budget(cfg.budget)
            .with_seed(cfg.seed)
            .with_exec(exec)
            .with_cache(cache);
        Ok(Session {
            cfg,
            ring,
            cache_path,
        })
    }

    pub fn save_cache(&self) -> Result<()> {
        if let Some(path) = &self.cache_path {
            self.ring
                .cache()
                .save(path, self.ring.field().spec())
                .with_context(|| format!("writing cache {}", path.display()))?;
        }
        Ok(())
    }

    fn exec(&self) -> Exec {
        self.ring.exec()
    }

    fn residue_ring(&self) -> Result<ResidueRing> {
        let text = self.cfg.modulus.as_deref().expect("validated");
        let m = self
            .ring
            .parse_monic(text)
            .map_err(|e| usage(format!("--Q {text:?}: {e}")))?;
        Ok(ResidueRing::new(&self.ring, &m)?)
    }

    /// The classes named by `--A0`: one polynomial, or every unit for `all`.
    fn classes(&self, ring: &ResidueRing) -> Result<Vec<Poly>> {
        let text = self.cfg.a0.as_deref().expect("validated");
        if text.eq_ignore_ascii_case("all") {
            return Ok(ring.units().into_iter().map(|r| ring.residue_poly(r)).collect());
        }
        let a0 = self
            .ring
            .parse(text)
            .map_err(|e| usage(format!("--A0 {text:?}: {e}")))?;
        unit_residue(ring, &a0).map_err(|e| usage(e.to_string()))?;
        Ok(vec![a0])
    }

    fn selected_chars(&self, ring: &ResidueRing) -> Result<Vec<DirichletChar>> {
        Ok(match &self.cfg.character {
            Some(s) => vec![DirichletChar::parse(ring, s).map_err(|e| usage(e.to_string()))?],
            None => characters(ring),
        })
    }

    fn field_json(&self) -> &FieldSpec {
        self.ring.field().spec()
    }

    pub fn run(&self) -> Result<Output> {
        match self.cfg.command {
            Command::Primes => self.primes(),
            Command::Chars => self.chars(),
            Command::Lpoly => self.lpoly(),
            Command::Zeros => self.zeros(),
            Command::Rhcheck => self.rhcheck(),
            Command::Mertens => self.mertens(),
            Command::Constant => self.constant(),
            Command::Verify => self.verify(),
            Command::Kappa => self.kappa(),
        }
    }

    fn primes(&self) -> Result<Output> {
        #[derive(Serialize)]
        struct Report<'a> {
            field: &'a FieldSpec,
            degree: usize,
            count: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            irreducibles: Option<Vec<String>>,
        }
        let d = self.cfg.degree.expect("validated");
        let count = count_irreducibles(self.ring.q(), d as u64)?;
        let list = if self.cfg.list {
            Some(self.ring.irreducibles(d)?.iter().map(|p| p.to_string()).collect::<Vec<_>>())
        } else {
            None
        };
        let (csv_out, text) = match &list {
            Some(l) => (
                csv(&["degree", "poly"], l.iter().map(|p| vec![d.to_string(), p.clone()]).collect())?,
                l.iter().map(|p| format!("{p}\n")).collect(),
            ),
            None => (
                csv(&["degree", "count"], vec![vec![d.to_string(), count.to_string()]])?,
                format!("{count}\n"),
            ),
        };
        Ok(Output {
            json: json(&Report {
                field: self.field_json(),
                degree: d,
                count: count.to_string(),
                irreducibles: list,
            })?,
            csv: csv_out,
            text,
            pass: true,
            warnings: Vec::new(),
        })
    }

    fn chars(&self) -> Result<Output> {
        #[derive(Serialize)]
        struct CharRow {
            id: String,
            index: u64,
            order: u64,
            real: bool,
            values: Vec<[f64; 2]>,
        }
        #[derive(Serialize)]
        struct Orthogonality {
            max_deviation: f64,
            pass: bool,
        }
        #[derive(Serialize)]
        struct Report<'a> {
            field: &'a FieldSpec,
            #[serde(rename = "Q")]
            modulus: String,
            phi: u64,
            generators: Vec<String>,
            orders: Vec<u64>,
            units: Vec<String>,
            characters: Vec<CharRow>,
            orthogonality: Orthogonality,
        }
        let ring = self.residue_ring()?;
        let g = ring.unit_group();
        let units = ring.units();
        let unit_text: Vec<String> = units.iter().map(|&r| ring.residue_poly(r).to_string()).collect();
        let rows: Vec<CharRow> = self
            .selected_chars(&ring)?
            .into_iter()
            .map(|chi| CharRow {
                id: chi.id(),
                index: chi.index(),
                order: chi.order(),
                real: chi.is_real(),
                values: units
                    .iter()
                    .map(|&r| {
                        let v = chi.value(r);
                        [v.re, v.im]
                    })
                    .collect(),
            })
            .collect();
        let dev = ring.orthogonality_deviation(self.exec());
        let pass = dev <= 1e-9;
        let mut csv_rows = Vec::new();
        let mut text = format!(
            "Q = {}  Phi = {}  orders {:?}\northogonality max deviation {dev:.2e} ({})\n",
            ring.modulus(),
            ring.phi(),
            g.orders(),
            if pass { "pass" } else { "FAIL" }
        );
        for c in &rows {
            text.push_str(&format!("{} order {}{}\n", c.id, c.order, if c.real { " real" } else { "" }));
            for (u, v) in unit_text.iter().zip(&c.values) {
                csv_rows.push(vec![c.id.clone(), u.clone(), v[0].to_string(), v[1].to_string()]);
            }
        }
        Ok(Output {
            json: json(&Report {
                field: self.field_json(),
                modulus: ring.modulus().to_string(),
                phi: ring.phi(),
                generators: g.generators().iter().map(|&r| ring.residue_poly(r).to_string()).collect(),
                orders: g.orders().to_vec(),
                units: unit_text.clone(),
                characters: rows,
                orthogonality: Orthogonality { max_deviation: dev, pass },
            })?,
            csv: csv(&["char", "residue", "re", "im"], csv_rows)?,
            text,
            pass,
            warnings: Vec::new(),
        })
    }

    fn lpoly(&self) -> Result<Output> {
        #[derive(Serialize)]
        struct Row {
            char: String,
            degree: usize,
            principal: bool,
            coeffs: Vec<[f64; 2]>,
            #[serde(skip_serializing_if = "Option::is_none")]
            pole: Option<u64>,
            stripped: usize,
            vanishing_ratio: f64,
        }
        let ring = self.residue_ring()?;
        let hist = MonicHistograms::new(&ring)?;
        let rows: Vec<Row> = self
            .selected_chars(&ring)?
            .iter()
            .map(|chi| {
                let l = l_coeffs_with(chi, &hist);
                Row {
                    char: chi.id(),
                    degree: l.degree(),
                    principal: l.is_principal(),
                    coeffs: l.coeffs().iter().map(|c| [c.re, c.im]).collect(),
                    pole: l.pole(),
                    stripped: l.stripped(),
                    vanishing_ratio: l.vanishing_ratio(),
                }
            })
            .collect();
        let mut csv_rows = Vec::new();
        let mut text = String::new();
        for r in &rows {
            let terms: Vec<String> = r.coeffs.iter().map(|c| fmt_complex(*c)).collect();
            let pole = r.pole.map_or(String::new(), |q| format!(" / (1 - {q}u)"));
            text.push_str(&format!("{}: [{}]{pole}\n", r.char, terms.join(", ")));
            for (n, c) in r.coeffs.iter().enumerate() {
                csv_rows.push(vec![r.char.clone(), n.to_string(), c[0].to_string(), c[1].to_string()]);
            }
        }
        Ok(Output {
            json: json(&rows)?,
            csv: csv(&["char", "n", "re", "im"], csv_rows)?,
            text,
            pass: true,
            warnings: Vec::new(),
        })
    }

    fn zeros(&self) -> Result<Output> {
        let ring = self.residue_ring()?;
        let chars = self.selected_chars(&ring)?;
        if let [chi] = chars.as_slice() {
            if chi.is_principal() {
                return Err(usage(format!(
                    "{chi} is principal: L(u, chi_0) = prod_(P|Q) (1 - u^deg P) / (1 - {}u) has a pole at u = 1/{}, so there is no finite zero set",
                    self.ring.q(),
                    self.ring.q()
                )));
            }
        }
        let hist = MonicHistograms::new(&ring)?;
        let tol = self.cfg.tolerances.zero_class;
        let mut reports = Vec::new();
        for chi in chars.iter().filter(|c| !c.is_principal()) {
            let l = l_coeffs_with(chi, &hist);
            let zs = reciprocal_zeros_with(&l, self.cfg.root_method)?;
            let rh = rh_check_with(&zs, tol);
            let zeros = zs
                .zeros()
                .iter()
                .map(|z| ZeroRecord {
                    class: ffmertens::lfunc::classify_with(z.value, zs.q(), tol),
                    ..ZeroRecord::from(z)
                })
                .collect();
            reports.push(LReport {
                char: chi.id(),
                degree: l.degree(),
                principal: false,
                coeffs: l.coeffs().iter().map(|c| [c.re, c.im]).collect(),
                zeros,
                rh_pass: rh.pass,
            });
        }
        let pass = reports.iter().all(|r| r.rh_pass);
        let mut csv_rows = Vec::new();
        let mut text = String::new();
        for r in &reports {
            text.push_str(&format!("{} (degree {}):\n", r.char, r.degree));
            for (j, z) in r.zeros.iter().enumerate() {
                text.push_str(&format!(
                    "  {}  |alpha| = {:.12}  {:?}\n",
                    fmt_complex([z.re, z.im]),
                    z.modulus,
                    z.class
                ));
                csv_rows.push(vec![
                    r.char.clone(),
                    j.to_string(),
                    z.re.to_string(),
                    z.im.to_string(),
                    z.modulus.to_string(),
                    class_name(z),
                ]);
            }
        }
        Ok(Output {
            json: json(&reports)?,
            csv: csv(&["char", "j", "re", "im", "modulus", "class"], csv_rows)?,
            text,
            pass,
            warnings: Vec::new(),
        })
    }

    fn rhcheck(&self) -> Result<Output> {
        #[derive(Serialize)]
        struct Anomaly {
            #[serde(rename = "Q")]
            modulus: String,
            char: String,
            #[serde(flatten)]
            zero: ZeroRecord,
        }
        #[derive(Serialize)]
        struct PerModulus {
            #[serde(rename = "Q")]
            modulus: String,
            characters: usize,
            critical: usize,
            trivial: usize,
            anomalies: usize,
        }
        #[derive(Serialize)]
        struct Report<'a> {
            field: &'a FieldSpec,
            moduli: usize,
            characters: usize,
            zeros: usize,
            critical: usize,
            trivial: usize,
            anomalies: Vec<Anomaly>,
            pass: bool,
            per_modulus: Vec<PerModulus>,
        }
        let rings: Vec<ResidueRing> = match self.cfg.max_deg_q {
            Some(d) => {
                let mut out = Vec::new();
                for deg in 1..=d {
                    for m in self.ring.enumerate_monic(deg)? {
                        out.push(ResidueRing::new(&self.ring, &m)?);
                    }
                }
                out
            }
            None => vec![self.residue_ring()?],
        };
        let tol = self.cfg.tolerances.zero_class;
        let mut per = Vec::new();
        let mut anomalies = Vec::new();
        let mut total = PerModulus {
            modulus: String::new(),
            characters: 0,
            critical: 0,
            trivial: 0,
            anomalies: 0,
        };
        let mut zeros = 0;
        for ring in &rings {
            let ld = RingLData::new(ring, self.cfg.root_method, self.exec())?;
            let mut row = PerModulus {
                modulus: ring.modulus().to_string(),
                characters: ld.chars().len(),
                critical: 0,
                trivial: 0,
                anomalies: 0,
            };
            for d in ld.data() {
                let Some(zs) = &d.zeros else { continue };
                let rh = rh_check_with(zs, tol);
                row.critical += rh.critical;
                row.trivial += rh.trivial;
                row.anomalies += rh.anomalies.len();
                zeros += zs.len();
                anomalies.extend(rh.anomalies.into_iter().map(|z| Anomaly {
                    modulus: row.modulus.clone(),
                    char: d.chi().id(),
                    zero: z,
                }));
            }
            total.characters += row.characters;
            total.critical += row.critical;
            total.trivial += row.trivial;
            per.push(row);
        }
        let pass = anomalies.is_empty();
        let text = format!(
            "{} moduli, {} characters, {zeros} zeros: {} critical, {} trivial, anomalies: {}\n",
            rings.len(),
            total.characters,
            total.critical,
            total.trivial,
            anomalies.len()
        );
        let csv_rows = per
            .iter()
            .map(|r| {
                vec![
                    r.modulus.clone(),
                    r.characters.to_string(),
                    r.critical.to_string(),
                    r.trivial.to_string(),
                    r.anomalies.to_string(),
                ]
            })
            .collect();
        Ok(Output {
            json: json(&Report {
                field: self.field_json(),
                moduli: rings.len(),
                characters: total.characters,
                zeros,
                critical: total.critical,
                trivial: total.trivial,
                anomalies,
                pass,
                per_modulus: per,
            })?,
            csv: csv(&["Q", "characters", "critical", "trivial", "anomalies"], csv_rows)?,
            text,
            pass,
            warnings: Vec::new(),
        })
    }

    fn mertens(&self) -> Result<Output> {
        let ring = self.residue_ring()?;
        let range = self.cfg.n.expect("validated");
        let mut points: Vec<MertensPoint> = Vec::new();
        for a0 in self.classes(&ring)? {
            let traj = mertens_trajectory(&ring, &a0, range.end)?;
            points.extend(traj.into_iter().skip(range.start));
        }
        let mut text = String::new();
        let mut csv_rows = Vec::new();
        for p in &points {
            let (m, a) = (p.modulus.clone().unwrap_or_default(), p.a0.clone().unwrap_or_default());
            text.push_str(&format!(
                "Q={m} A0={a} n={}: P = {:.15e}  log P = {:.15}  primes = {}\n",
                p.n, p.product, p.log_product, p.prime_count
            ));
            csv_rows.push(vec![
                m,
                a,
                p.n.to_string(),
                p.product.to_string(),
                p.log_product.to_string(),
                p.prime_count.to_string(),
            ]);
        }
        Ok(Output {
            json: json(&points)?,
            csv: csv(&["Q", "A0", "n", "product", "log_product", "prime_count"], csv_rows)?,
            text,
            pass: true,
            warnings: Vec::new(),
        })
    }

    fn methods(&self) -> Methods {
        let depth = self.cfg.cutoff.unwrap_or_else(|| self.cfg.validator_depth());
        let has = |m| self.cfg.methods.contains(&m);
        Methods {
            euler_cutoff: has(Method::Euler).then_some(depth),
            limit_n_max: has(Method::Limit).then(|| match self.cfg.n {
                Some(r) if self.cfg.command == Command::Constant => r.end,
                _ => depth,
            }),
        }
    }

    fn constant_ok(&self, rep: &ConstantReport) -> bool {
        let t = &self.cfg.tolerances;
        rep.c.max_relative_gap() <= t.cross_method && rep.c.imag_residual <= t.imag_residual
    }

    fn constant(&self) -> Result<Output> {
        let ring = self.residue_ring()?;
        let ctx = ModulusContext::new(&ring, self.cfg.root_method, self.exec())?;
        let methods = self.methods();
        let classes = self.classes(&ring)?;
        let reports: Vec<ConstantReport> = self
            .exec()
            .map(&classes, |a0| ctx.constant_report(a0, &methods))
            .into_iter()
            .collect::<ffmertens::Result<_>>()?;
        let pass = reports.iter().all(|r| self.constant_ok(r));
        let mut text = String::new();
        let mut csv_rows = Vec::new();
        for r in &reports {
            let c = &r.c;
            text.push_str(&format!("Q={} A0={} Phi={} kappa_q={:.15}\n", r.modulus, r.a0, r.phi, r.kappa_q));
            text.push_str(&format!("  via_L          {:.15}\n", c.via_l));
            if let Some(e) = &c.via_euler {
                text.push_str(&format!("  via_euler      {:.15}  (cutoff {})\n", e.value, e.cutoff));
            }
            if let Some(l) = &c.via_limit {
                text.push_str(&format!(
                    "  via_limit      {:.15}  (raw {:.15}, n {}..{}, fit residual {:.1e})\n",
                    l.extrapolated, l.raw, l.n_min, l.n_max, l.residual
                ));
            }
            text.push_str(&format!(
                "  imag residual  {:.1e}  max relative gap {:.1e}{}\n",
                c.imag_residual,
                c.max_relative_gap(),
                if self.constant_ok(r) { "" } else { "  ANOMALY" }
            ));
            csv_rows.push(vec![
                r.modulus.clone(),
                r.a0.clone(),
                r.phi.to_string(),
                r.kappa_q.to_string(),
                c.via_l.to_string(),
                c.via_l_leading.to_string(),
                opt(c.via_euler.as_ref().map(|e| e.value)),
                opt(c.via_euler.as_ref().map(|e| e.cutoff)),
                opt(c.via_limit.as_ref().map(|l| l.extrapolated)),
                opt(c.via_limit.as_ref().map(|l| l.raw)),
                opt(c.via_limit.as_ref().map(|l| l.n_max)),
                c.imag_residual.to_string(),
            ]);
        }
        Ok(Output {
            json: json(&reports)?,
            csv: csv(
                &[
                    "Q", "A0", "phi", "kappa_q", "via_L", "via_L_leading", "via_euler", "euler_cutoff",
                    "via_limit", "limit_raw", "limit_n_max", "imag_residual",
                ],
                csv_rows,
            )?,
            text,
            pass,
            warnings: Vec::new(),
        })
    }

    fn verify(&self) -> Result<Output> {
        let ring = self.residue_ring()?;
        let ctx = ModulusContext::new(&ring, self.cfg.root_method, self.exec())?;
        let range = self.cfg.n.expect("validated");
        let methods = self.methods();
        let classes = self.classes(&ring)?;
        let reports: Vec<VerificationReport> = self
            .exec()
            .map(&classes, |a0| ctx.verify_theorem(a0, range.start..=range.end, &methods))
            .into_iter()
            .collect::<ffmertens::Result<_>>()?;
        let mut warnings: Vec<String> = reports.iter().flat_map(|r| r.warnings.clone()).collect();
        warnings.dedup();
        let cross_ok = reports.iter().all(|r| {
            let t = &self.cfg.tolerances;
            r.c.max_relative_gap() <= t.cross_method && r.c.imag_residual <= t.imag_residual
        });
        let pass = cross_ok && reports.iter().all(|r| r.fit.pass);
        let mut text = String::new();
        let mut csv_rows = Vec::new();
        for r in &reports {
            text.push_str(&format!(
                "Q={} A0={} C={:.15}  decay {:.4}/n  K {:.3e}  {}  (harmonic decay {:.4}/n, K {:.3e})\n",
                r.modulus,
                r.a0,
                r.c.via_l,
                r.fit.decay_rate,
                r.fit.k,
                if r.fit.pass { "pass" } else { "FAIL" },
                r.harmonic_fit.decay_rate,
                r.harmonic_fit.k
            ));
            for p in &r.points {
                text.push_str(&format!(
                    "  n={:>3}  P = {:.12e}  R = {:+.6e}  R_harmonic = {:+.6e}\n",
                    p.n, p.product, p.residual, p.harmonic_residual
                ));
                csv_rows.push(vec![
                    r.modulus.clone(),
                    r.a0.clone(),
                    p.n.to_string(),
                    p.product.to_string(),
                    p.residual.to_string(),
                    p.harmonic_residual.to_string(),
                ]);
            }
        }
        Ok(Output {
            json: json(&reports)?,
            csv: csv(&["Q", "A0", "n", "product", "residual", "harmonic_residual"], csv_rows)?,
            text,
            pass,
            warnings,
        })
    }

    fn kappa(&self) -> Result<Output> {
        #[derive(Serialize)]
        struct Report {
            q: u64,
            kappa_q: f64,
            n: usize,
            /// `n log q prod_{deg P <= n} (1 - |P|^{-1})`
            limit: f64,
            rel_gap: f64,
        }
        let q = self.ring.q();
        let n = self.cfg.n.map_or(1_000_000, |r| r.end);
        let k = kappa_q(q);
        let limit = n as f64 * (q as f64).ln() * rosen_log_product(q, n).exp();
        let rep = Report {
            q,
            kappa_q: k,
            n,
            limit,
            rel_gap: limit / k - 1.0,
        };
        Ok(Output {
            text: format!(
                "kappa_{q} = {k:.15}\nn log q Rosen(n) at n = {n}: {limit:.15} (relative gap {:.3e})\n",
                rep.rel_gap
            ),
            csv: csv(
                &["q", "kappa_q", "n", "limit", "rel_gap"],
                vec![vec![q.to_string(), k.to_string(), n.to_string(), limit.to_string(), rep.rel_gap.to_string()]],
            )?,
            json: json(&rep)?,
            pass: true,
            warnings: Vec::new(),
        })
    }
}

fn prime_power(q: u64) -> Result<(u32, u32)> {
    let f = Field::from_order(q).map_err(|e| usage(format!("--q {q}: {e}")))?;
    let s = f.spec();
    Ok((s.p, s.k))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn fmt_complex(c: [f64; 2]) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(c[0]), clean(c[1]));
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{:+}i", im)
    }
}

fn class_name(z: &ZeroRecord) -> String {
    serde_json::to_value(z.class)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
