use std::fmt;
use std::str::FromStr;

use super::{EntryModel, Family, SymmetryClass};
use crate::{Error, Result};

/// Key-value description of one ensemble draw.
///
/// ```text
/// class=DIII
/// n=64
/// sigma2=1
/// family=gaussian
/// seed=42
/// ```
///
/// `family` also accepts `rademacher` and `atoms:(v1,p1),(v2,p2),...`; for
/// atoms `sigma2` may be omitted and is then implied by the atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub class: SymmetryClass,
    pub n: usize,
    pub model: EntryModel,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut class = None;
        let mut n = None;
        let mut sigma2 = None;
        let mut family = None;
        let mut seed = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line, message };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{body}'")))?;
            let value = value.trim();
            match key.trim() {
                "class" => class = Some(value.parse::<SymmetryClass>().map_err(|e| err(e.to_string()))?),
                "n" => n = Some(value.parse::<usize>().map_err(|e| err(format!("n: {e}")))?),
                "sigma2" => sigma2 = Some(value.parse::<f64>().map_err(|e| err(format!("sigma2: {e}")))?),
                "family" => family = Some(value.parse::<Family>().map_err(|e| err(e.to_string()))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| err(format!("seed: {e}")))?),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        let missing = |k: &str| Error::Config {
            line: 0,
            message: format!("missing key '{k}'"),
        };
        let class = class.ok_or_else(|| missing("class"))?;
        let n = n.ok_or_else(|| missing("n"))?;
        let family = family.unwrap_or(Family::Gaussian);
        let model = match (&family, sigma2) {
            (Family::Atoms(atoms), None) => EntryModel::atoms(atoms.clone())?,
            (_, s) => EntryModel::new(family, s.unwrap_or(1.0))?,
        };
        class.check_n(n)?;
        Ok(Self {
            class,
            n,
            model,
            seed: seed.unwrap_or(0),
        })
    }
}

impl fmt::Display for EnsembleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class={}", self.class)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "sigma2={}", self.model.sigma2())?;
        writeln!(f, "family={}", self.model.family())?;
        writeln!(f, "seed={}", self.seed)
    }
}

impl FromStr for EnsembleConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_back() {
        let text = "class=DIII\nn=8\nsigma2=2\nfamily=rademacher\nseed=11\n";
        let cfg: EnsembleConfig = text.parse().unwrap();
        assert_eq!(cfg.class, SymmetryClass::Diii);
        assert_eq!(cfg.n, 8);
        assert_eq!(cfg.model.sigma2(), 2.0);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.to_string().parse::<EnsembleConfig>().unwrap(), cfg);
    }

    #[test]
    fn atoms_imply_sigma2() {
        let cfg: EnsembleConfig = "class=CI\nn=3\nfamily=atoms:(-1,0.5),(1,0.5)\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.model.sigma2(), 1.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match "class=CI\nn=3\nbogus\n".parse::<EnsembleConfig>() {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match "class=CI\ncolour=red\n".parse::<EnsembleConfig>() {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!("class=DIII\nn=1\n".parse::<EnsembleConfig>().is_err());
    }
}
