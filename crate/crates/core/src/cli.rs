//! Command-line surface. Every command prints one JSON document; exit status
//! is 0 on success, 1 when a verification fails and 2 on usage or domain
//! errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{parse_rational, rational_to_string, CharacterData};
use crate::error::{Error, Result, DEFAULT_CAP};
use crate::ffspace::{iso_count_closed, rstar, rstar_by_class, FpQuadSpace, SpaceClass};
use crate::gauss::{
    alpha_closed, alpha_decomposition, alpha_oracle, gauss_matches, gtilde_closed, gtilde_oracle,
    gyd_closed, gyd_oracle, BlockShape,
};
use crate::hecke::{
    apply_tj, apply_tprime, apply_ttilde, bound_holds, exponent_m, lambda_j, verify_annihilation,
    verify_eichler, HeckeParams, TildePath,
};
use crate::jacobi::{
    apply_tj_jacobi, jacobi_indices, lift_from_siegel, psi_projection, verify_relation,
    JacobiStore, JacobiVariant, Lifted,
};
use crate::lattice::{
    discriminant, level_of, neighbor_count_formula, neighbors, snf_invariants, sublattices_between,
    EnumFilter, GramMatrix,
};
use crate::suite::{run_group, SuiteConfig, SuiteGroup};
use crate::theta::{
    coeff_table, even_psd_grams, rational_matrix, repr_count, table_source, CoeffTable,
    CoefficientSource, TablePolicy, ThetaSource,
};

#[derive(Parser, Debug)]
#[command(
    name = "hecke",
    version,
    about = "Exact Hecke operators on Fourier coefficients of half-integral weight Siegel forms"
)]
pub struct Cli {
    /// Upper bound on any single enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64)]
    pub cap: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for cached coefficient tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauss sums and local densities.
    #[command(subcommand)]
    Gauss(GaussCmd),
    /// Quadratic spaces over F_p.
    #[command(subcommand)]
    Ff(FfCmd),
    /// Integral lattices and sublattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Theta series coefficients.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Hecke operators on Siegel forms.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Hecke operators on Jacobi forms.
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Run a verification suite.
    Suite {
        #[arg(value_enum)]
        group: GroupArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum GaussCmd {
    /// G_Y(D) for a block pair: closed form against the exhaustive sum.
    Gyd {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        r0: usize,
        #[arg(long, default_value_t = 0)]
        r1: usize,
        #[arg(long, default_value_t = 0)]
        r2: usize,
        #[arg(long, default_value_t = 0)]
        r3: usize,
        /// Y1 as JSON, r1 × r1.
        #[arg(long, default_value = "[]")]
        y1: String,
    },
    /// Normalized twisted Gauss sum G~(V).
    Twisted {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
    },
    /// α(W), closed, exhaustive and through α′.
    Alpha {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FfCmd {
    /// Isometry class of a quadratic space over F_p.
    Classify {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
    },
    /// R*(V, W): subspaces of V isometric to W.
    Rstar {
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        p: u64,
    },
    /// Totally isotropic l-dimensional subspaces.
    Iso {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Level, discriminant and determinant.
    Level {
        #[arg(long)]
        gram: String,
    },
    /// Invariant factors of an integer matrix.
    Snf {
        #[arg(long)]
        h: String,
    },
    /// Lattices Ω = (1/p)ΛH between pΛ and (1/p)Λ.
    Between {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        /// Restrict to a type n0,n1,n2.
        #[arg(long)]
        r#type: Option<String>,
        /// Keep only even integral Ω.
        #[arg(long)]
        even: bool,
    },
    /// p^j-neighbors of L.
    Neighbors {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThetaCmd {
    /// Coefficient table of θ^{(n)}(L) on even grams with diagonal ≤ bound.
    Coeffs {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: i64,
    },
    /// r(L, T).
    Repr {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        t: String,
    },
}

#[derive(Args, Debug)]
pub struct SourceArgs {
    /// Lattice whose theta series is the source.
    #[arg(long)]
    pub gram: Option<String>,
    /// Coefficient table file instead of a theta source.
    #[arg(long, conflicts_with = "gram")]
    pub table: Option<PathBuf>,
    /// Weight k + 1/2 of a table source.
    #[arg(long)]
    pub k: Option<i64>,
    /// Level of a table source.
    #[arg(long)]
    pub level: Option<u64>,
    /// χ′(p) of a table source at the operator prime.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpArg {
    Tj,
    Ttilde,
    TtildeCombination,
    Tprime,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// One coefficient of f|T at Λ.
    Apply {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "ttilde")]
        op: OpArg,
    },
    /// λ_j(p²).
    Eigenvalue {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i32,
    },
    /// θ(L)|T′_j against the neighbor theta sums.
    VerifyEichler {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// θ(L)|T′_{k+a} against zero.
    VerifyAnnihilate {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// |λ_j(p²)| ≤ 4^{n+j} p^M.
    Bound {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i32,
        #[arg(long, default_value = "0")]
        gamma: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Tj,
    TtildeDirect,
    TtildeCombination,
}

#[derive(Subcommand, Debug)]
pub enum JacobiCmd {
    /// Coefficients of f·θ^{(n,1)} for the theta series of L.
    Lift {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        r_bound: i64,
    },
    /// ψ applied to a store file.
    Psi {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// One coefficient of (f·θ)|T^J at (T, R).
    Apply {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, value_enum, default_value = "tj")]
        variant: VariantArg,
    },
    /// The Siegel/Jacobi operator relation at p.
    Verify {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        r_bound: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupArg {
    Gauss,
    Lemmas,
    Theta,
    Eichler,
    Jacobi,
    All,
}

/// Parses `aIn` (a·I_n), `diag:a,b,...` or a JSON matrix.
pub fn parse_gram(s: &str) -> Result<GramMatrix> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("diag:") {
        let d = rest
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad diagonal entry {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(GramMatrix::diag(&d));
    }
    if let Some((a, n)) = s.split_once('I') {
        if let (Ok(a), Ok(n)) = (a.parse::<i64>(), n.parse::<usize>()) {
            return Ok(GramMatrix::scalar(n, a));
        }
    }
    let m: Vec<Vec<i64>> = serde_json::from_str(s)
        .map_err(|e| Error::Invalid(format!("gram {s:?}: expected aIn, diag:… or JSON ({e})")))?;
    GramMatrix::new(m)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Invalid(format!("{what} {s:?}: {e}")))
}

fn cap(cli: &Cli) -> u128 {
    cli.cap as u128
}

fn rat_json(r: &crate::arith::Rational) -> Value {
    Value::String(rational_to_string(r))
}

fn table_key(gram: &GramMatrix, n: usize, bound: i64) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(gram.entries()).expect("serializable"));
    h.update(format!("|{n}|{bound}"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Coefficient table, read from or written to the cache when one is set.
fn cached_table(
    cache: Option<&Path>,
    gram: &GramMatrix,
    n: usize,
    bound: i64,
    cap: u128,
) -> Result<CoeffTable> {
    let Some(dir) = cache else {
        return coeff_table(gram, n, bound, cap);
    };
    let path = dir.join(format!("{}.json", table_key(gram, n, bound)));
    if let Ok(text) = std::fs::read_to_string(&path) {
        let v: Value = parse_json("cached table", &text)?;
        return CoeffTable::from_json(&v);
    }
    let t = coeff_table(gram, n, bound, cap)?;
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Invalid(format!("cache dir {}: {e}", dir.display())))?;
    std::fs::write(
        &path,
        serde_json::to_string(&t.to_json()).expect("serializable"),
    )
    .map_err(|e| Error::Invalid(format!("cache write {}: {e}", path.display())))?;
    Ok(t)
}

fn source_from(args: &SourceArgs, p: u64, cap: u128) -> Result<Box<dyn CoefficientSource>> {
    if let Some(g) = &args.gram {
        return Ok(Box::new(ThetaSource::new(parse_gram(g)?, cap)?));
    }
    let Some(path) = &args.table else {
        return Err(Error::Invalid(
            "either --gram or --table is required".into(),
        ));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("--table {}: {e}", path.display())))?;
    let table = CoeffTable::from_json(&parse_json("--table", &text)?)?;
    let k = args
        .k
        .ok_or_else(|| Error::Invalid("--k is required with --table".into()))?;
    let level = args
        .level
        .ok_or_else(|| Error::Invalid("--level is required with --table".into()))?;
    let mut values = std::collections::BTreeMap::new();
    if let Some(c) = args.chi {
        values.insert(p, c);
    }
    Ok(Box::new(table_source(
        table,
        TablePolicy::ErrorOutside,
        CharacterData::Explicit { k, level, values },
    )))
}

/// Runs a parsed command; the flag is false when a verification failed.
pub fn execute(cli: &Cli) -> Result<(Value, bool)> {
    let cap = cap(cli);
    let ok = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Gauss(g) => match g {
            GaussCmd::Gyd {
                p,
                r0,
                r1,
                r2,
                r3,
                y1,
            } => {
                let shape = BlockShape {
                    r0: *r0,
                    r1: *r1,
                    r2: *r2,
                    r3: *r3,
                };
                let y1: Vec<Vec<i64>> = parse_json("--y1", y1)?;
                let blocks = crate::gauss::YBlocks {
                    y1: y1.clone(),
                    ..Default::default()
                };
                let (y, d) = crate::gauss::block_pair(shape, &blocks, *p)?;
                let closed = gyd_closed(shape, &y1, *p)?;
                let oracle = gyd_oracle(&y, &d, *p, cap)?;
                let m = gauss_matches(&closed, &oracle)?;
                Ok((
                    json!({"closed": {"rational": rat_json(&closed.r0), "g_coefficient": rat_json(&closed.r1)}, "oracle": oracle.to_string(), "match": m}),
                    m,
                ))
            }
            GaussCmd::Twisted { gram, p } => {
                let v = FpQuadSpace::new(*p, parse_gram(gram)?.entries())?;
                let cls = v.classify()?;
                let c = gtilde_closed(&cls, *p);
                let o = gtilde_oracle(&v, cap)?;
                Ok((
                    json!({"class": cls, "closed": rat_json(&c), "oracle": rat_json(&o), "match": c == o}),
                    c == o,
                ))
            }
            GaussCmd::Alpha { gram, p } => {
                let w = parse_gram(gram)?;
                let a = alpha_oracle(w.entries(), *p, cap)?;
                let c = alpha_closed(w.entries(), *p)?;
                let d = alpha_decomposition(w.entries(), *p, cap)?;
                let m = a == c && a == d;
                Ok((
                    json!({"alpha": a.to_string(), "closed": c.to_string(), "via_alpha_prime": d.to_string(), "match": m}),
                    m,
                ))
            }
        },
        Command::Ff(f) => match f {
            FfCmd::Classify { gram, p } => {
                let v = FpQuadSpace::new(*p, parse_gram(gram)?.entries())?;
                let cls = v.classify()?;
                ok(json!({"class": cls, "regular": cls.regular_type(*p)}))
            }
            FfCmd::Rstar { v, w, p } => {
                let v = FpQuadSpace::new(*p, parse_gram(v)?.entries())?;
                let w = FpQuadSpace::new(*p, parse_gram(w)?.entries())?;
                ok(json!({"count": rstar(&v, &w, cap)?}))
            }
            FfCmd::Iso { gram, l, p } => {
                let v = FpQuadSpace::new(*p, parse_gram(gram)?.entries())?;
                let cls = v.classify()?;
                let brute = rstar_by_class(&v, *l, cap)?
                    .get(&SpaceClass::zero(*l))
                    .copied()
                    .unwrap_or(0);
                let closed = (cls.radical_dim == 0)
                    .then(|| iso_count_closed(cls.regular_type(*p), *l, *p).to_string());
                let m = closed.as_ref().is_none_or(|c| *c == brute.to_string());
                Ok((json!({"count": brute, "closed": closed}), m))
            }
        },
        Command::Lattice(l) => match l {
            LatticeCmd::Level { gram } => {
                let g = parse_gram(gram)?;
                ok(
                    json!({"level": level_of(&g)?.to_string(), "discriminant": discriminant(&g).to_string(), "det": g.det().to_string()}),
                )
            }
            LatticeCmd::Snf { h } => {
                let h: Vec<Vec<i64>> = parse_json("--h", h)?;
                ok(json!({"invariants": snf_invariants(&h)?}))
            }
            LatticeCmd::Between {
                gram,
                p,
                r#type,
                even,
            } => {
                let g = parse_gram(gram)?;
                let typ = match r#type {
                    None => None,
                    Some(s) => {
                        let v = s
                            .split(',')
                            .map(|x| {
                                x.trim()
                                    .parse::<usize>()
                                    .map_err(|_| Error::Invalid(format!("--type entry {x:?}")))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        match v[..] {
                            [a, b, c] => Some((a, b, c)),
                            _ => return Err(Error::Invalid("--type needs n0,n1,n2".into())),
                        }
                    }
                };
                let subs = sublattices_between(
                    &g,
                    *p,
                    &EnumFilter {
                        typ,
                        even_only: *even,
                    },
                    cap,
                )?;
                ok(json!({"count": subs.len(), "lattices": subs}))
            }
            LatticeCmd::Neighbors { gram, p, j } => {
                let g = parse_gram(gram)?;
                let nb = neighbors(&g, *p, *j, cap)?;
                let k = (g.n() as i64 - 1) / 2;
                ok(
                    json!({"count": nb.len(), "formula": neighbor_count_formula(k, *j as u32, *p).to_string(), "neighbors": nb}),
                )
            }
        },
        Command::Theta(t) => match t {
            ThetaCmd::Coeffs { gram, n, bound } => {
                let g = parse_gram(gram)?;
                ok(cached_table(cli.cache_dir.as_deref(), &g, *n, *bound, cap)?.to_json())
            }
            ThetaCmd::Repr { gram, t } => {
                let q = parse_gram(gram)?;
                let t = parse_gram(t)?;
                ok(json!({"count": repr_count(&q, &rational_matrix(&t), cap)?.to_string()}))
            }
        },
        Command::Hecke(h) => hecke_cmd(h, cap),
        Command::Jacobi(j) => jacobi_cmd(j, cap),
        Command::Suite { group } => {
            let g = match group {
                GroupArg::Gauss => SuiteGroup::Gauss,
                GroupArg::Lemmas => SuiteGroup::Lemmas,
                GroupArg::Theta => SuiteGroup::Theta,
                GroupArg::Eichler => SuiteGroup::Eichler,
                GroupArg::Jacobi => SuiteGroup::Jacobi,
                GroupArg::All => SuiteGroup::All,
            };
            let rep = run_group(
                g,
                &SuiteConfig {
                    cap,
                    ..SuiteConfig::default()
                },
            )?;
            let pass = rep.pass;
            Ok((serde_json::to_value(rep).expect("serializable"), pass))
        }
    }
}

fn hecke_cmd(h: &HeckeCmd, cap: u128) -> Result<(Value, bool)> {
    match h {
        HeckeCmd::Apply {
            source,
            p,
            n,
            j,
            t,
            op,
        } => {
            let src = source_from(source, *p, cap)?;
            let t = parse_gram(t)?;
            if t.n() != *n {
                return Err(Error::Invalid(format!(
                    "--t has degree {}, expected {n}",
                    t.n()
                )));
            }
            let hp = HeckeParams::for_character(src.character(), *p, *n, *j, cap)?;
            let v = match op {
                OpArg::Tj => {
                    serde_json::to_value(apply_tj(src.as_ref(), &t, &hp)?).expect("serializable")
                }
                OpArg::Ttilde => rat_json(&apply_ttilde(src.as_ref(), &t, &hp, TildePath::Direct)?),
                OpArg::TtildeCombination => rat_json(&apply_ttilde(
                    src.as_ref(),
                    &t,
                    &hp,
                    TildePath::Combination,
                )?),
                OpArg::Tprime => rat_json(&apply_tprime(src.as_ref(), &t, &hp)?),
            };
            Ok((json!({"value": v}), true))
        }
        HeckeCmd::Eigenvalue { k, n, j, p, chi } => {
            let hp = HeckeParams {
                p: *p,
                j: *j,
                k: *k,
                n: *n,
                chi: *chi,
                p_divides_level: false,
                cap,
            };
            hp.validate()?;
            Ok((json!({"lambda": rat_json(&lambda_j(&hp)?)}), true))
        }
        HeckeCmd::VerifyEichler {
            gram,
            p,
            n,
            j,
            bound,
        } => {
            let r = verify_eichler(
                &parse_gram(gram)?,
                *p,
                *n,
                *j,
                &even_psd_grams(*n, *bound),
                cap,
            )?;
            let pass = r.pass;
            Ok((serde_json::to_value(r).expect("serializable"), pass))
        }
        HeckeCmd::VerifyAnnihilate {
            gram,
            p,
            n,
            a,
            bound,
        } => {
            let r = verify_annihilation(
                &parse_gram(gram)?,
                *p,
                *n,
                *a,
                &even_psd_grams(*n, *bound),
                cap,
            )?;
            let pass = r.pass;
            Ok((serde_json::to_value(r).expect("serializable"), pass))
        }
        HeckeCmd::Bound {
            k,
            n,
            j,
            p,
            chi,
            gamma,
        } => {
            let hp = HeckeParams {
                p: *p,
                j: *j,
                k: *k,
                n: *n,
                chi: *chi,
                p_divides_level: false,
                cap,
            };
            hp.validate()?;
            let lambda = lambda_j(&hp)?;
            let m = exponent_m(*n, *j, *k, &parse_rational(gamma)?)?;
            let holds = bound_holds(&lambda, *n, *j, *p, &m);
            Ok((
                json!({"lambda": rat_json(&lambda), "M": rat_json(&m), "holds": holds}),
                holds,
            ))
        }
    }
}

fn jacobi_cmd(j: &JacobiCmd, cap: u128) -> Result<(Value, bool)> {
    match j {
        JacobiCmd::Lift {
            gram,
            n,
            bound,
            r_bound,
        } => {
            let src = ThetaSource::new(parse_gram(gram)?, cap)?;
            let store = lift_from_siegel(&src, *n, &jacobi_indices(*n, *bound, *r_bound))?;
            Ok((store.to_json(), true))
        }
        JacobiCmd::Psi { store, n } => {
            let text = std::fs::read_to_string(store)
                .map_err(|e| Error::Invalid(format!("--store {}: {e}", store.display())))?;
            let ch = CharacterData::Explicit {
                k: 0,
                level: 1,
                values: Default::default(),
            };
            let s = JacobiStore::from_json(&parse_json("--store", &text)?, *n, false, ch)?;
            Ok((psi_projection(&s).to_json(), true))
        }
        JacobiCmd::Apply {
            gram,
            p,
            n,
            j,
            t,
            r,
            variant,
        } => {
            let src = ThetaSource::new(parse_gram(gram)?, cap)?;
            let t = parse_gram(t)?;
            let r: Vec<i64> = parse_json("--r", r)?;
            let ch = src.character();
            let hp = if ch.level() % p == 0 {
                HeckeParams {
                    p: *p,
                    j: *j,
                    k: ch.k(),
                    n: *n,
                    chi: 0,
                    p_divides_level: true,
                    cap,
                }
            } else {
                HeckeParams::for_character(ch, *p, *n, *j, cap)?
            };
            hp.validate()?;
            let v = match variant {
                VariantArg::Tj => JacobiVariant::Tj,
                VariantArg::TtildeDirect => JacobiVariant::TtildeDirect,
                VariantArg::TtildeCombination => JacobiVariant::TtildeCombination,
            };
            let c = apply_tj_jacobi(&Lifted { siegel: &src }, &t, &r, &hp, v)?;
            Ok((json!({"value": rat_json(&c)}), true))
        }
        JacobiCmd::Verify {
            gram,
            p,
            n,
            j,
            bound,
            r_bound,
        } => {
            let src = ThetaSource::new(parse_gram(gram)?, cap)?;
            let r = verify_relation(&src, *p, *n, *j, &jacobi_indices(*n, *bound, *r_bound), cap)?;
            let pass = r.pass;
            Ok((serde_json::to_value(r).expect("serializable"), pass))
        }
    }
}

/// Parses, runs and renders; returns (exit status, stdout text, stderr text).
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    match execute(&cli) {
        Ok((v, pass)) => {
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            let code = if pass { 0 } else { 1 };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    return (
                        2,
                        String::new(),
                        json!({"error": format!("--out {}: {e}", path.display())}).to_string()
                            + "\n",
                    );
                }
                return (code, String::new(), String::new());
            }
            (code, text, String::new())
        }
        Err(e) => (
            2,
            String::new(),
            json!({"error": e.to_string()}).to_string() + "\n",
        ),
    }
}
