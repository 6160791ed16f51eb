use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Gaussian,
    Ultimatum,
    Kuramoto,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::Gaussian => "gaussian",
            ModelTag::Ultimatum => "ultimatum",
            ModelTag::Kuramoto => "kuramoto",
        })
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ModelTag::Gaussian),
            "ultimatum" => Ok(ModelTag::Ultimatum),
            "kuramoto" => Ok(ModelTag::Kuramoto),
            other => Err(Error::param(format!("unknown dynamics model {other:?}"))),
        }
    }
}

/// Provenance written to the `meta` file of a dataset directory.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetMeta {
    pub model: ModelTag,
    pub seed: u64,
    pub noise_std: f64,
    pub noise_seed: u64,
    /// Kuramoto only.
    pub coupling: Option<f64>,
    /// Kuramoto only.
    pub step: Option<f64>,
}

/// `r` rounds of interaction matrices `Ψ^t` (N×N) and responses `Y^t` (N).
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsDataset {
    n: usize,
    rounds: usize,
    interaction: Vec<f64>,
    response: Vec<f64>,
    noise: Option<Vec<f64>>,
    meta: DatasetMeta,
}

impl DynamicsDataset {
    /// `interaction` is `rounds × n × n` and `response` is `rounds × n`, both
    /// row-major. Diagonals of each `Ψ^t` must be zero and all values finite.
    pub fn new(
        n: usize,
        rounds: usize,
        interaction: Vec<f64>,
        response: Vec<f64>,
        noise: Option<Vec<f64>>,
        meta: DatasetMeta,
    ) -> Result<Self> {
        if n == 0 || rounds == 0 {
            return Err(Error::param("dataset needs at least one node and one round"));
        }
        if interaction.len() != rounds * n * n {
            return Err(Error::DimensionMismatch {
                expected: rounds * n * n,
                got: interaction.len(),
            });
        }
        if response.len() != rounds * n {
            return Err(Error::DimensionMismatch {
                expected: rounds * n,
                got: response.len(),
            });
        }
        if let Some(eps) = &noise {
            if eps.len() != rounds * n {
                return Err(Error::DimensionMismatch {
                    expected: rounds * n,
                    got: eps.len(),
                });
            }
        }
        if interaction.iter().chain(&response).any(|v| !v.is_finite()) {
            return Err(Error::data("dataset contains non-finite values"));
        }
        for t in 0..rounds {
            for i in 0..n {
                if interaction[t * n * n + i * n + i] != 0.0 {
                    return Err(Error::data(format!(
                        "round {t}: self-interaction of node {i} is non-zero"
                    )));
                }
            }
        }
        Ok(DynamicsDataset {
            n,
            rounds,
            interaction,
            response,
            noise,
            meta,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds
    }

    pub fn model(&self) -> ModelTag {
        self.meta.model
    }

    pub fn meta(&self) -> &DatasetMeta {
        &self.meta
    }

    /// `Ψ^t`, row-major N×N.
    pub fn psi(&self, t: usize) -> &[f64] {
        let nn = self.n * self.n;
        &self.interaction[t * nn..(t + 1) * nn]
    }

    #[inline]
    pub fn psi_at(&self, t: usize, i: usize, j: usize) -> f64 {
        self.interaction[t * self.n * self.n + i * self.n + j]
    }

    pub fn y(&self, t: usize) -> &[f64] {
        &self.response[t * self.n..(t + 1) * self.n]
    }

    #[inline]
    pub fn y_at(&self, t: usize, i: usize) -> f64 {
        self.response[t * self.n + i]
    }

    /// Noise draws `ε`, `rounds × n`, when the dataset was simulated.
    pub fn noise(&self) -> Option<&[f64]> {
        self.noise.as_deref()
    }

    /// Keep only the first `rounds` rounds.
    pub fn truncated(&self, rounds: usize) -> Result<Self> {
        if rounds == 0 || rounds > self.rounds {
            return Err(Error::param(format!(
                "cannot keep {rounds} of {} rounds",
                self.rounds
            )));
        }
        let n = self.n;
        DynamicsDataset::new(
            n,
            rounds,
            self.interaction[..rounds * n * n].to_vec(),
            self.response[..rounds * n].to_vec(),
            self.noise.as_ref().map(|e| e[..rounds * n].to_vec()),
            self.meta.clone(),
        )
    }

    /// Write the directory layout: `meta`, `psi_<t>.csv` for t = 1..r,
    /// `y.csv` (r×N) and, when present, `eps.csv` (r×N).
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let m = &self.meta;
        let mut meta = format!(
            "n={}\nr={}\nmodel_tag={}\nseed={}\nnoise_std={}\nnoise_seed={}\n",
            self.n,
            self.rounds,
            m.model,
            m.seed,
            textio::fmt_f64(m.noise_std),
            m.noise_seed
        );
        if let Some(c) = m.coupling {
            meta.push_str(&format!("coupling={}\n", textio::fmt_f64(c)));
        }
        if let Some(h) = m.step {
            meta.push_str(&format!("step={}\n", textio::fmt_f64(h)));
        }
        let meta_path = dir.join("meta");
        fs::write(&meta_path, meta).map_err(|e| Error::io(format!("writing {}", meta_path.display()), e))?;
        for t in 0..self.rounds {
            textio::write_matrix_csv(&dir.join(format!("psi_{}.csv", t + 1)), self.n, self.n, self.psi(t))?;
        }
        textio::write_matrix_csv(&dir.join("y.csv"), self.rounds, self.n, &self.response)?;
        if let Some(eps) = &self.noise {
            textio::write_matrix_csv(&dir.join("eps.csv"), self.rounds, self.n, eps)?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let meta_path = dir.join("meta");
        let text = fs::read_to_string(&meta_path)
            .map_err(|e| Error::io(format!("reading {}", meta_path.display()), e))?;
        let kv = textio::parse_key_values(&text, &meta_path)?;
        let get = |key: &str| -> Result<&str> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::data(format!("{}: missing key {key:?}", meta_path.display())))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|_| Error::data(format!("{}: bad value for {key:?}", meta_path.display())))
        };
        let int = |key: &str| -> Result<u64> {
            get(key)?
                .parse()
                .map_err(|_| Error::data(format!("{}: bad value for {key:?}", meta_path.display())))
        };
        let n = int("n")? as usize;
        let rounds = int("r")? as usize;
        let meta = DatasetMeta {
            model: get("model_tag")?.parse()?,
            seed: int("seed")?,
            noise_std: num("noise_std")?,
            noise_seed: int("noise_seed")?,
            coupling: num("coupling").ok(),
            step: num("step").ok(),
        };

        let expect = |path: &Path, rows: usize, cols: usize, got: (usize, usize)| -> Result<()> {
            if got != (rows, cols) {
                return Err(Error::data(format!(
                    "{}: expected {rows}x{cols}, found {}x{}",
                    path.display(),
                    got.0,
                    got.1
                )));
            }
            Ok(())
        };
        let mut interaction = Vec::with_capacity(rounds * n * n);
        for t in 0..rounds {
            let path = dir.join(format!("psi_{}.csv", t + 1));
            let (r, c, data) = textio::read_matrix_csv(&path)?;
            expect(&path, n, n, (r, c))?;
            interaction.extend(data);
        }
        let y_path = dir.join("y.csv");
        let (r, c, response) = textio::read_matrix_csv(&y_path)?;
        expect(&y_path, rounds, n, (r, c))?;
        let eps_path = dir.join("eps.csv");
        let noise = if eps_path.exists() {
            let (r, c, eps) = textio::read_matrix_csv(&eps_path)?;
            expect(&eps_path, rounds, n, (r, c))?;
            Some(eps)
        } else {
            None
        };
        DynamicsDataset::new(n, rounds, interaction, response, noise, meta)
    }
}
