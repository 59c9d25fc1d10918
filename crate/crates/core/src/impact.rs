//! The five indicators and characterization of inventories.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lci::{FlowId, FlowVector};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Indicator {
    #[serde(rename = "GWP100")]
    Gwp100,
    #[serde(rename = "CED")]
    Ced,
    ResourceDamage,
    HumanHealthDamage,
    EcosystemDamage,
}

pub const INDICATORS: [Indicator; 5] = [
    Indicator::Gwp100,
    Indicator::Ced,
    Indicator::ResourceDamage,
    Indicator::HumanHealthDamage,
    Indicator::EcosystemDamage,
];

impl Indicator {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn id(self) -> &'static str {
        match self {
            Indicator::Gwp100 => "GWP100",
            Indicator::Ced => "CED",
            Indicator::ResourceDamage => "ResourceDamage",
            Indicator::HumanHealthDamage => "HumanHealthDamage",
            Indicator::EcosystemDamage => "EcosystemDamage",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Indicator::Gwp100 => "kg CO2eq",
            Indicator::Ced => "MJeq",
            Indicator::ResourceDamage => "$",
            Indicator::HumanHealthDamage => "DALY",
            Indicator::EcosystemDamage => "species.year",
        }
    }

    pub fn method_name(self) -> &'static str {
        match self {
            Indicator::Gwp100 => "IPCC 2013 GWP 100a",
            Indicator::Ced => "Cumulative Energy Demand",
            Indicator::ResourceDamage => "ReCiPe Endpoint (E), resources",
            Indicator::HumanHealthDamage => "ReCiPe Endpoint (E), human health",
            Indicator::EcosystemDamage => "ReCiPe Endpoint (E), ecosystems",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Indicator::Gwp100 => "Climate change",
            Indicator::Ced => "Primary energy",
            Indicator::ResourceDamage => "Resource damage",
            Indicator::HumanHealthDamage => "Human health damage",
            Indicator::EcosystemDamage => "Ecosystem damage",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', '-', ' '], "");
        Ok(match key.as_str() {
            "gwp100" | "gwp" | "climatechange" => Indicator::Gwp100,
            "ced" | "primaryenergy" => Indicator::Ced,
            "resourcedamage" | "rd" | "resources" => Indicator::ResourceDamage,
            "humanhealthdamage" | "hh" | "humanhealth" | "daly" => Indicator::HumanHealthDamage,
            "ecosystemdamage" | "ed" | "ecosystems" => Indicator::EcosystemDamage,
            _ => return Err(Error::UnknownIndicator(s.to_string())),
        })
    }
}

/// One score per indicator, indexed by [`Indicator`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImpactVector<T>(pub [T; 5]);

impl<T: Scalar> ImpactVector<T> {
    pub fn zero() -> Self {
        ImpactVector([T::zero(); 5])
    }

    pub fn from_fn(f: impl FnMut(Indicator) -> T) -> Self {
        ImpactVector(INDICATORS.map(f))
    }

    pub fn map(self, mut f: impl FnMut(T) -> T) -> Self {
        ImpactVector(self.0.map(&mut f))
    }

    pub fn get(&self, k: Indicator) -> T {
        self.0[k.index()]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == T::zero())
    }

    pub fn cast<U: Scalar>(self) -> ImpactVector<U> {
        ImpactVector(self.0.map(|v| U::lit(v.to_f64_lossy())))
    }
}

impl<T> Index<Indicator> for ImpactVector<T> {
    type Output = T;

    fn index(&self, k: Indicator) -> &T {
        &self.0[k as usize]
    }
}

impl<T> IndexMut<Indicator> for ImpactVector<T> {
    fn index_mut(&mut self, k: Indicator) -> &mut T {
        &mut self.0[k as usize]
    }
}

impl<T: Scalar> Add for ImpactVector<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        ImpactVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<T: Scalar> AddAssign for ImpactVector<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> Sub for ImpactVector<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        ImpactVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<T: Scalar> Neg for ImpactVector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<T: Scalar> Mul<T> for ImpactVector<T> {
    type Output = Self;

    fn mul(self, rhs: T) -> Self {
        self.map(|v| v * rhs)
    }
}

impl<T: Scalar> Div<T> for ImpactVector<T> {
    type Output = Self;

    fn div(self, rhs: T) -> Self {
        self.map(|v| v / rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfEntry<T> {
    pub value: T,
    pub provenance: String,
}

/// Per-flow characterization factors, keyed by `(flow, indicator)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CharacterizationFactorSet<T> {
    factors: BTreeMap<(FlowId, Indicator), CfEntry<T>>,
}

impl<T: Scalar> CharacterizationFactorSet<T> {
    pub fn new() -> Self {
        CharacterizationFactorSet {
            factors: BTreeMap::new(),
        }
    }

    pub fn insert(
        &mut self,
        flow: impl Into<FlowId>,
        k: Indicator,
        value: T,
        provenance: impl Into<String>,
    ) -> Result<()> {
        let flow = flow.into();
        if !value.is_finite() {
            return Err(Error::Domain(format!("factor for `{flow}` on {k} is not finite")));
        }
        self.factors.insert(
            (flow, k),
            CfEntry {
                value,
                provenance: provenance.into(),
            },
        );
        Ok(())
    }

    /// Builder-style insert for tests and small hand-made sets.
    pub fn with(mut self, flow: &str, k: Indicator, value: T) -> Self {
        self.insert(flow, k, value, "").expect("finite factor");
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, flow: &FlowId, k: Indicator) -> Option<T> {
        self.factors.get(&(flow.clone(), k)).map(|e| e.value)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FlowId, Indicator, &CfEntry<T>)> {
        self.factors.iter().map(|((f, k), e)| (f, *k, e))
    }

    pub fn defines(&self, k: Indicator) -> bool {
        self.factors.keys().any(|(_, kk)| *kk == k)
    }

    pub fn indicators(&self) -> BTreeSet<Indicator> {
        self.factors.keys().map(|(_, k)| *k).collect()
    }

    /// Factors grouped by indicator.
    pub fn by_indicator(&self) -> BTreeMap<Indicator, BTreeMap<FlowId, T>> {
        let mut out: BTreeMap<Indicator, BTreeMap<FlowId, T>> = BTreeMap::new();
        for ((flow, k), e) in &self.factors {
            out.entry(*k).or_default().insert(flow.clone(), e.value);
        }
        out
    }

    /// Characterizes a tailpipe-style map given in grams.
    pub fn characterize_grams(&self, grams: &BTreeMap<FlowId, T>) -> ImpactVector<T> {
        let kg = T::lit(1e-3);
        let g = FlowVector {
            entries: grams.iter().map(|(f, v)| (f.clone(), *v * kg)).collect(),
        };
        apply_all(&g, self)
    }
}

/// Score for one indicator plus the flows that had no factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Characterization<T> {
    pub indicator: Indicator,
    pub score: T,
    pub missing: Vec<FlowId>,
}

/// `EI_k = Σ_j flow_j · CF_{j,k}`. Flows without a factor contribute zero
/// and are listed in `missing` when their amount is nonzero.
pub fn characterize<T: Scalar>(
    g: &FlowVector<T>,
    cf: &CharacterizationFactorSet<T>,
    k: Indicator,
) -> Result<Characterization<T>> {
    if !cf.defines(k) {
        return Err(Error::UnknownIndicator(format!("{k} (no factors in this set)")));
    }
    Ok(score(g, cf, k))
}

fn score<T: Scalar>(g: &FlowVector<T>, cf: &CharacterizationFactorSet<T>, k: Indicator) -> Characterization<T> {
    let mut total = T::zero();
    let mut missing = Vec::new();
    for (flow, amount) in &g.entries {
        match cf.factor(flow, k) {
            Some(factor) => total = total + *amount * factor,
            None if *amount != T::zero() => missing.push(flow.clone()),
            None => {}
        }
    }
    Characterization {
        indicator: k,
        score: total,
        missing,
    }
}

/// All five scores. Indicators the set does not define score zero.
pub fn apply_all<T: Scalar>(g: &FlowVector<T>, cf: &CharacterizationFactorSet<T>) -> ImpactVector<T> {
    ImpactVector::from_fn(|k| score(g, cf, k).score)
}
