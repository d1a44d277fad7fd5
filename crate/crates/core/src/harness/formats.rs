//! Plain-text input formats for saddle problems and games.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::games::{GameSpec, QuadraticGame};
use crate::saddle::SaddleProblem;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_reals(line: usize, text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("{s:?}: {e}"),
            })
        })
        .collect()
}

/// Header `n m tau`, then `n` rows of `Q` and `m` rows of `A`, each with `n`
/// whitespace-separated reals. `#` starts a comment.
pub fn parse_saddle_file(text: &str) -> Result<SaddleProblem> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header `n m tau`".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: hline,
            message: format!("expected `n m tau`, got {header:?}"),
        });
    }
    let dim = |s: &str| {
        s.parse::<usize>().map_err(|e| Error::Parse {
            line: hline,
            message: format!("{s:?}: {e}"),
        })
    };
    let (n, m) = (dim(fields[0])?, dim(fields[1])?);
    let tau = fields[2].parse::<f64>().map_err(|e| Error::Parse {
        line: hline,
        message: format!("{:?}: {e}", fields[2]),
    })?;

    let mut rows = Vec::with_capacity(n + m);
    for (line, text) in lines.by_ref().take(n + m) {
        let row = parse_reals(line, text)?;
        if row.len() != n {
            return Err(Error::Parse {
                line,
                message: format!("expected {n} entries, got {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n + m {
        return Err(Error::Parse {
            line: hline,
            message: format!("expected {} matrix rows, found {}", n + m, rows.len()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            message: "trailing content after the last row of A".into(),
        });
    }
    let q = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let a = DMatrix::from_fn(m, n, |i, j| rows[n + i][j]);
    SaddleProblem::new(q, a, tau)
}

/// A game read from a key-value file; `game` is present when `K` is given.
#[derive(Debug, Clone)]
pub struct GameFile {
    pub spec: GameSpec,
    pub game: Option<QuadraticGame>,
}

/// Lines `key = values` (or `key: values`) with keys `players`, `mu`,
/// `ell` (row-major), and optionally `K` (row-major) and `b`. Values are
/// separated by whitespace or commas. Without `ell`, `|K|` is used; with
/// both, `|K_ij| ≤ ell_ij` is required. `b` defaults to zero.
pub fn parse_game_file(text: &str) -> Result<GameFile> {
    let mut fields: BTreeMap<String, (usize, Vec<f64>)> = BTreeMap::new();
    for (line, content) in content_lines(text) {
        let (key, value) = content.split_once(['=', ':']).ok_or(Error::Parse {
            line,
            message: format!("expected `key = values`, got {content:?}"),
        })?;
        let key = key.trim().to_string();
        if !matches!(key.as_str(), "players" | "mu" | "ell" | "K" | "b") {
            return Err(Error::Parse {
                line,
                message: format!("unknown key {key:?}"),
            });
        }
        if fields.contains_key(&key) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key {key:?}"),
            });
        }
        fields.insert(key, (line, parse_reals(line, value)?));
    }

    let (pline, players) = fields.get("players").ok_or(Error::Parse {
        line: 1,
        message: "missing `players`".into(),
    })?;
    let n = match players.as_slice() {
        [x] if *x >= 1.0 && x.fract() == 0.0 => *x as usize,
        _ => {
            return Err(Error::Parse {
                line: *pline,
                message: "`players` must be one positive integer".into(),
            })
        }
    };
    let get = |key: &str, len: usize| -> Result<Option<Vec<f64>>> {
        match fields.get(key) {
            None => Ok(None),
            Some((_, v)) if v.len() == len => Ok(Some(v.clone())),
            Some((line, v)) => Err(Error::Parse {
                line: *line,
                message: format!("`{key}` needs {len} values, got {}", v.len()),
            }),
        }
    };
    let mu = get("mu", n)?.ok_or(Error::Parse {
        line: *pline,
        message: "missing `mu`".into(),
    })?;
    let mu = DVector::from_vec(mu);
    let square = |v: Vec<f64>| DMatrix::from_row_slice(n, n, &v);
    let k = get("K", n * n)?.map(square);
    let ell = get("ell", n * n)?.map(square);
    let b = get("b", n)?;

    let ell = match (ell, &k) {
        (Some(ell), Some(k)) => {
            let violated = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && k[(i, j)].abs() > ell[(i, j)]);
            if let Some((i, j)) = violated {
                return Err(Error::InvalidInput(format!(
                    "|K[{i}][{j}]| = {} exceeds ell[{i}][{j}] = {}",
                    k[(i, j)].abs(),
                    ell[(i, j)]
                )));
            }
            ell
        }
        (Some(ell), None) => ell,
        (None, Some(k)) => k.abs(),
        (None, None) => {
            return Err(Error::Parse {
                line: *pline,
                message: "need `ell` or `K`".into(),
            })
        }
    };
    if b.is_some() && k.is_none() {
        return Err(Error::InvalidInput("`b` given without `K`".into()));
    }
    let spec = GameSpec::new(mu.clone(), ell)?;
    let game = match k {
        Some(k) => Some(QuadraticGame::new(
            mu,
            k,
            b.map(DVector::from_vec).unwrap_or_else(|| DVector::zeros(n)),
        )?),
        None => None,
    };
    Ok(GameFile { spec, game })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn saddle_file_round_trip() {
        let prob = parse_saddle_file("# toy\n1 1 1\n1\n1\n").unwrap();
        assert_eq!(prob.q(), &dmatrix![1.0]);
        assert_eq!(prob.a(), &dmatrix![1.0]);
        assert_eq!(prob.tau(), 1.0);

        let prob = parse_saddle_file("2 1 0.5\n2 0\n0 3\n1 -1\n").unwrap();
        assert_eq!(prob.q(), &dmatrix![2.0, 0.0; 0.0, 3.0]);
        assert_eq!(prob.a(), &dmatrix![1.0, -1.0]);
    }

    #[test]
    fn saddle_file_errors() {
        assert!(matches!(parse_saddle_file(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_saddle_file("1 1\n1\n1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_saddle_file("2 1 1\n1 0\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_saddle_file("2 1 1\n1 0\n0 1\n1\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_saddle_file("1 1 1\n1\n1\n2\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_saddle_file("1 1 1\nx\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_saddle_file("1 1 -1\n1\n1\n"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn game_file_with_ell_only() {
        let f = parse_game_file("players = 2\nmu = 1, 1\nell = 0 0.5 0.5 0\n").unwrap();
        assert_eq!(f.spec.ell(), &dmatrix![0.0, 0.5; 0.5, 0.0]);
        assert!(f.game.is_none());
    }

    #[test]
    fn game_file_with_quadratic_terms() {
        let text = "players: 2\nmu: 2 2\nK: 0 1 1 0\nb: -2 -2  # linear terms\n";
        let f = parse_game_file(text).unwrap();
        assert_eq!(f.spec.ell(), &dmatrix![0.0, 1.0; 1.0, 0.0]);
        let game = f.game.unwrap();
        assert_eq!(game.b(), &DVector::from_vec(vec![-2.0, -2.0]));

        let f = parse_game_file("players = 2\nmu = 2 2\nK = 0 -1 1 0\nell = 0 1 2 0\n").unwrap();
        assert_eq!(f.spec.ell()[(1, 0)], 2.0);
    }

    #[test]
    fn game_file_errors() {
        assert!(parse_game_file("mu = 1\nell = 0\n").is_err());
        assert!(parse_game_file("players = 2\nmu = 1\nell = 0 0 0 0\n").is_err());
        assert!(parse_game_file("players = 1\nmu = 1\n").is_err());
        assert!(parse_game_file("players = 1\nmu = 1\nell = 0\nfoo = 3\n").is_err());
        assert!(parse_game_file("players = 1\nmu = 1\nmu = 2\nell = 0\n").is_err());
        assert!(parse_game_file("players = 2\nmu = 1 1\nK = 0 2 0 0\nell = 0 1 0 0\n").is_err());
        assert!(parse_game_file("players = 1.5\nmu = 1\nell = 0\n").is_err());
        assert!(parse_game_file("players = 1\nmu = -1\nell = 0\n").is_err());
    }
}
