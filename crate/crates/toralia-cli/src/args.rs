use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use toralia::lattice::{Lattice, TorsionPoint};
use toralia::numeric::c;
use toralia::torusgroup::GroupEmbedding;

/// Automorphic Lie algebras on complex tori: construction, verification and
/// classification.
#[derive(Debug, Parser)]
#[command(name = "toralia", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the group embeddings admitted by the lattice.
    Catalog(Common),
    /// Classify a configured case and cross-check it against its normal form.
    Classify(Common),
    /// Lattice invariants and the constants of the configured group.
    Constants(Common),
    /// Evaluate the normal-form generators and intertwiner at a point.
    Eval(EvalArgs),
    /// Run the invariant suite for the configured case.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    /// Translations by a point of order N.
    Cn,
    /// Rotation z -> e^{2 pi i / l} z.
    Cl,
    /// Translations by a point of order N together with z -> -z.
    Dn,
    /// The half periods.
    C2xc2,
    /// Tetrahedral group on the hexagonal lattice.
    A4,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau_re: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tau_im: f64,
    #[arg(long, value_enum, default_value_t = GroupArg::Cn)]
    pub group: GroupArg,
    /// N for cn/dn, l for cl.
    #[arg(long)]
    pub order: Option<u32>,
    /// Translation point as a/b/n, meaning (a w1 + b w2)/n.
    #[arg(long)]
    pub torsion: Option<String>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub char_j: i64,
    /// Overrides every upper-bound tolerance of the verification suite.
    #[arg(long, env = "TORALIA_TOL")]
    pub tol: Option<f64>,
    /// Cap on q-series terms for the lattice invariants.
    #[arg(long, default_value_t = 64)]
    pub trunc: usize,
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of key = value lines.
    #[arg(long)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub z_re: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z_im: f64,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Verify generators with E perturbed by this relative amount; the suite
    /// is then expected to fail.
    #[arg(long)]
    pub perturb: Option<f64>,
}

/// Default order when `--order` and `--torsion` are both absent.
pub const DEFAULT_ORDER: u32 = 3;

impl Common {
    pub fn lattice(&self) -> Result<Lattice, String> {
        if !(self.tau_im > 0.0) || !self.tau_re.is_finite() || !self.tau_im.is_finite() {
            return Err(format!("tau must lie in the upper half plane, got {} + {}i", self.tau_re, self.tau_im));
        }
        Lattice::new(c(self.tau_re, self.tau_im)).map_err(|e| e.to_string())
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(format!("--tol must be positive, got {t}"));
            }
        }
        if self.trunc == 0 {
            return Err("--trunc must be at least 1".into());
        }
        if self.samples == 0 {
            return Err("--samples must be at least 1".into());
        }
        Ok(())
    }

    fn shift(&self) -> Result<TorsionPoint, String> {
        let from_torsion = self.torsion.as_deref().map(|s| s.parse::<TorsionPoint>().map_err(|e| e.to_string())).transpose()?;
        match (from_torsion, self.order) {
            (Some(p), Some(n)) if p.order() != n as i64 => Err(format!("torsion {p} has order {}, not {n}", p.order())),
            (Some(p), _) => Ok(p),
            (None, Some(0)) => Err("--order must be positive".into()),
            (None, n) => TorsionPoint::new(1, 0, n.unwrap_or(DEFAULT_ORDER) as i64).map_err(|e| e.to_string()),
        }
    }

    pub fn embedding(&self) -> Result<GroupEmbedding, String> {
        let l = self.lattice()?;
        let emb = match self.group {
            GroupArg::Cn => GroupEmbedding::cn_translation(&l, self.shift()?),
            GroupArg::Dn => GroupEmbedding::dihedral(&l, self.shift()?),
            GroupArg::Cl => GroupEmbedding::cl_rotation(&l, self.order.ok_or("--group cl needs --order")?),
            GroupArg::C2xc2 => GroupEmbedding::c2xc2(&l),
            GroupArg::A4 => GroupEmbedding::a4(&l),
        };
        emb.map_err(|e| e.to_string())
    }
}
