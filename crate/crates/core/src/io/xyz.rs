//! XYZ reader and writer. Multi-frame files are concatenated blocks of
//! `count / comment / count atom lines`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Vec3;

const ELEMENTS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",
    "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce",
    "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir",
    "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc",
    "Lv", "Ts", "Og",
];

pub const MAX_ATOMIC_NUMBER: u32 = ELEMENTS.len() as u32;

/// Atomic number for an element symbol, case-insensitive.
pub fn atomic_number(symbol: &str) -> Option<u32> {
    ELEMENTS
        .iter()
        .position(|e| e.eq_ignore_ascii_case(symbol))
        .map(|k| k as u32 + 1)
}

pub fn element_symbol(z: u32) -> Option<&'static str> {
    ELEMENTS.get((z as usize).checked_sub(1)?).copied()
}

#[derive(Debug, Clone, PartialEq)]
pub struct XyzFrame {
    pub comment: String,
    pub species: Vec<u32>,
    pub positions: Vec<Vec3>,
}

/// Parses every frame in `text`. Line numbers in errors are 1-based.
pub fn parse_xyz(text: &str) -> Result<Vec<XyzFrame>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut frames = Vec::new();
    let mut at = 0;
    while at < lines.len() {
        if lines[at].trim().is_empty() {
            at += 1;
            continue;
        }
        let count: usize = lines[at]
            .trim()
            .parse()
            .map_err(|_| Error::parse(at + 1, format!("expected atom count, found `{}`", lines[at].trim())))?;
        let comment = lines
            .get(at + 1)
            .ok_or_else(|| Error::parse(at + 2, "missing comment line"))?
            .to_string();
        let mut species = Vec::with_capacity(count);
        let mut positions = Vec::with_capacity(count);
        for k in 0..count {
            let line_no = at + 3 + k;
            let line = lines
                .get(line_no - 1)
                .ok_or_else(|| Error::parse(line_no, format!("expected {count} atoms, file ended after {k}")))?;
            let (z, p) = parse_atom_line(line, line_no)?;
            species.push(z);
            positions.push(p);
        }
        frames.push(XyzFrame {
            comment,
            species,
            positions,
        });
        at += 2 + count;
    }
    if frames.is_empty() {
        return Err(Error::parse(1, "no frames"));
    }
    Ok(frames)
}

fn parse_atom_line(line: &str, line_no: usize) -> Result<(u32, Vec3)> {
    let mut tokens = line.split_whitespace();
    let symbol = tokens.next().ok_or_else(|| Error::parse(line_no, "empty atom line"))?;
    let z = match symbol.parse::<u32>() {
        Ok(z) if (1..=MAX_ATOMIC_NUMBER).contains(&z) => z,
        Ok(z) => return Err(Error::parse(line_no, format!("atomic number {z} out of range"))),
        Err(_) => atomic_number(symbol).ok_or_else(|| Error::parse(line_no, format!("unknown element `{symbol}`")))?,
    };
    let mut xyz = [0.0; 3];
    for (axis, slot) in ["x", "y", "z"].iter().zip(xyz.iter_mut()) {
        let token = tokens
            .next()
            .ok_or_else(|| Error::parse(line_no, format!("missing {axis} coordinate")))?;
        *slot = token
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(line_no, format!("invalid {axis} coordinate `{token}`")))?;
    }
    Ok((z, Vec3::new(xyz[0], xyz[1], xyz[2])))
}

/// Formats one frame with 17 significant digits per coordinate.
pub fn format_xyz(frame: &XyzFrame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", frame.positions.len());
    let _ = writeln!(out, "{}", frame.comment.replace('\n', " "));
    for (z, p) in frame.species.iter().zip(&frame.positions) {
        let symbol = element_symbol(*z).unwrap_or("X");
        let _ = writeln!(out, "{symbol:<2} {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    out
}

pub fn format_xyz_frames(frames: &[XyzFrame]) -> String {
    frames.iter().map(format_xyz).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const WATER: &str = "3\nwater\nO 0.0 0.0 0.0\nH 0.9572 0.0 0.0\nH -0.24 0.927 0.0\n";

    #[test]
    fn reads_single_frame() {
        let frames = parse_xyz(WATER).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].species, vec![8, 1, 1]);
        assert_eq!(frames[0].positions[1], Vec3::new(0.9572, 0.0, 0.0));
        assert_eq!(frames[0].comment, "water");
    }

    #[test]
    fn reads_multiple_frames() {
        let text = format!("{WATER}{WATER}");
        assert_eq!(parse_xyz(&text).unwrap().len(), 2);
    }

    #[test]
    fn malformed_coordinate_reports_line() {
        let text = "2\nbad\nH 0 0 0\nH 0 zero 0\n";
        match parse_xyz(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("y coordinate"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncated_and_unknown() {
        assert!(matches!(
            parse_xyz("3\nx\nH 0 0 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_xyz("1\nx\nQq 0 0 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_xyz("one\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn periodic_table_lookup() {
        assert_eq!(atomic_number("C"), Some(6));
        assert_eq!(atomic_number("cl"), Some(17));
        assert_eq!(atomic_number("Og"), Some(118));
        assert_eq!(element_symbol(35), Some("Br"));
        assert_eq!(element_symbol(0), None);
    }

    #[test]
    fn write_then_read_is_lossless() {
        let frame = XyzFrame {
            comment: "t".into(),
            species: vec![6, 17],
            positions: vec![Vec3::new(0.1, -1.0 / 3.0, 1e-7), Vec3::new(2.0f64.sqrt(), 0.0, -7.25)],
        };
        let back = parse_xyz(&format_xyz(&frame)).unwrap();
        assert_eq!(back[0], frame);
    }
}
