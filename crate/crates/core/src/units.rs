//! Canonical units and conversions.
//!
//! Every flow is stored in one of the canonical units `kg`, `MJ`, `kWh`,
//! `tkm`, `item`, `m`, `m2`, `m3`. Exchanges written in other units are
//! converted on ingestion.

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Mass,
    Energy,
    Transport,
    Count,
    Length,
    Area,
    Volume,
}

pub const CANONICAL: [&str; 8] = ["kg", "MJ", "kWh", "tkm", "item", "m", "m2", "m3"];

// (spelling, canonical symbol, factor to canonical)
const ALIASES: &[(&str, &str, f64)] = &[
    ("kg", "kg", 1.0),
    ("g", "kg", 1e-3),
    ("mg", "kg", 1e-6),
    ("t", "kg", 1e3),
    ("tonne", "kg", 1e3),
    ("mj", "MJ", 1.0),
    ("j", "MJ", 1e-6),
    ("kj", "MJ", 1e-3),
    ("gj", "MJ", 1e3),
    ("kwh", "kWh", 1.0),
    ("wh", "kWh", 1e-3),
    ("mwh", "kWh", 1e3),
    ("gwh", "kWh", 1e6),
    ("tkm", "tkm", 1.0),
    ("t*km", "tkm", 1.0),
    ("t km", "tkm", 1.0),
    ("t·km", "tkm", 1.0),
    ("kgkm", "tkm", 1e-3),
    ("item", "item", 1.0),
    ("items", "item", 1.0),
    ("item(s)", "item", 1.0),
    ("unit", "item", 1.0),
    ("units", "item", 1.0),
    ("p", "item", 1.0),
    ("m", "m", 1.0),
    ("km", "m", 1e3),
    ("cm", "m", 1e-2),
    ("mm", "m", 1e-3),
    ("m2", "m2", 1.0),
    ("m²", "m2", 1.0),
    ("ha", "m2", 1e4),
    ("km2", "m2", 1e6),
    ("m3", "m3", 1.0),
    ("m³", "m3", 1.0),
    ("l", "m3", 1e-3),
];

pub fn dimension(canonical: &str) -> Option<Dimension> {
    Some(match canonical {
        "kg" => Dimension::Mass,
        "MJ" | "kWh" => Dimension::Energy,
        "tkm" => Dimension::Transport,
        "item" => Dimension::Count,
        "m" => Dimension::Length,
        "m2" => Dimension::Area,
        "m3" => Dimension::Volume,
        _ => return None,
    })
}

/// Resolves a unit spelling to its canonical symbol and the factor that
/// converts an amount into it.
pub fn resolve(unit: &str) -> Result<(&'static str, f64)> {
    let key = unit.trim().to_lowercase();
    ALIASES
        .iter()
        .find(|(alias, _, _)| *alias == key)
        .map(|&(_, canonical, factor)| (canonical, factor))
        .ok_or_else(|| Error::UnknownUnit(unit.to_string()))
}

/// Canonical symbol for a unit spelling that denotes a canonical unit
/// exactly (factor 1).
pub fn canonical_symbol(unit: &str) -> Result<&'static str> {
    let (symbol, factor) = resolve(unit)?;
    if factor == 1.0 {
        Ok(symbol)
    } else {
        Err(Error::UnknownUnit(format!("{unit} (not a canonical unit)")))
    }
}

/// Converts an amount into the canonical unit of its spelling.
pub fn canonicalize<T: Scalar>(amount: T, unit: &str) -> Result<(T, &'static str)> {
    let (symbol, factor) = resolve(unit)?;
    Ok((amount * T::lit(factor), symbol))
}

/// Converts an amount from one unit spelling to another of the same
/// dimension. Energy converts between MJ and kWh at 3.6 MJ/kWh.
pub fn convert<T: Scalar>(amount: T, from: &str, to: &str) -> Result<T> {
    let (from_symbol, from_factor) = resolve(from)?;
    let (to_symbol, to_factor) = resolve(to)?;
    let bridge = match (from_symbol, to_symbol) {
        (a, b) if a == b => 1.0,
        ("kWh", "MJ") => 3.6,
        ("MJ", "kWh") => 1.0 / 3.6,
        _ => {
            return Err(Error::IncompatibleUnits {
                from: from.to_string(),
                to: to.to_string(),
            })
        }
    };
    Ok(amount * T::lit(from_factor * bridge / to_factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_resolve() {
        assert_eq!(resolve("t*km").unwrap(), ("tkm", 1.0));
        assert_eq!(resolve("Item(s)").unwrap(), ("item", 1.0));
        assert_eq!(resolve("m²").unwrap(), ("m2", 1.0));
        assert_eq!(resolve("MWh").unwrap(), ("kWh", 1e3));
        assert!(resolve("furlong").is_err());
    }

    #[test]
    fn every_canonical_unit_is_a_fixed_point() {
        for u in CANONICAL {
            assert_eq!(canonical_symbol(u).unwrap(), u);
            assert!(dimension(u).is_some());
        }
    }

    #[test]
    fn energy_bridges_kwh_and_mj() {
        let mj: f64 = convert(2.0, "kWh", "MJ").unwrap();
        assert!((mj - 7.2).abs() < 1e-12);
        let g: f64 = convert(1.5, "kg", "g").unwrap();
        assert!((g - 1500.0).abs() < 1e-9);
        assert!(convert(1.0f64, "kg", "m").is_err());
    }

    #[test]
    fn canonical_symbol_rejects_scaled_units() {
        assert!(canonical_symbol("g").is_err());
        assert_eq!(canonical_symbol("t km").unwrap(), "tkm");
    }
}
