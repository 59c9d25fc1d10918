//! One-at-a-time sensitivity axes, sweeps and break-even mileage.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::impact::{CharacterizationFactorSet, ImpactVector, Indicator};
use crate::mode::{
    modal_impact, AssessmentResult, EnergyData, InfrastructureAsset, Ownership, ServiceVehicle, TransportMode,
};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreightMode {
    Sea,
    Road,
    RailDiesel,
    RailElectric,
    Air,
}

impl FreightMode {
    pub const ALL: [FreightMode; 5] = [
        FreightMode::Sea,
        FreightMode::Road,
        FreightMode::RailDiesel,
        FreightMode::RailElectric,
        FreightMode::Air,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FreightMode::Sea => "sea",
            FreightMode::Road => "road",
            FreightMode::RailDiesel => "rail_diesel",
            FreightMode::RailElectric => "rail_electric",
            FreightMode::Air => "air",
        }
    }
}

impl fmt::Display for FreightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FreightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FreightMode::ALL
            .into_iter()
            .find(|m| m.id() == s.trim())
            .ok_or_else(|| Error::Configuration(format!("unknown freight mode `{s}`")))
    }
}

/// Impact per tonne-kilometre for each freight mode.
pub type FreightFactors<T> = BTreeMap<FreightMode, ImpactVector<T>>;

#[derive(Debug, Clone, PartialEq)]
pub struct ShippingLeg<T> {
    pub freight_mode: FreightMode,
    pub distance_km: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShippingRoute<T> {
    pub route_id: String,
    pub market: String,
    pub label: String,
    pub legs: Vec<ShippingLeg<T>>,
}

impl<T: Scalar> ShippingRoute<T> {
    pub fn validate(&self) -> Result<()> {
        if self.legs.is_empty() {
            return Err(Error::InvalidScenario(format!("route `{}` has no legs", self.route_id)));
        }
        if self.legs.iter().any(|l| !(l.distance_km > T::zero())) {
            return Err(Error::InvalidScenario(format!(
                "route `{}` has a nonpositive leg distance",
                self.route_id
            )));
        }
        Ok(())
    }

    pub fn total_km(&self) -> T {
        self.legs.iter().map(|l| l.distance_km).sum()
    }

    /// Impact of carrying one tonne along the route.
    pub fn burden_per_tonne(&self, freight: &FreightFactors<T>) -> Result<ImpactVector<T>> {
        let mut total = ImpactVector::zero();
        for leg in &self.legs {
            let factor = freight
                .get(&leg.freight_mode)
                .ok_or_else(|| Error::Configuration(format!("no freight factor for `{}`", leg.freight_mode)))?;
            total += *factor * leg.distance_km;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Lifespan,
    Servicing,
    Shipping,
    Electricity,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "lifespan" => Axis::Lifespan,
            "servicing" => Axis::Servicing,
            "shipping" => Axis::Shipping,
            "electricity" | "mix" => Axis::Electricity,
            _ => return Err(Error::InvalidScenario(format!("unknown axis `{s}`"))),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Lifespan => "lifespan",
            Axis::Servicing => "servicing",
            Axis::Shipping => "shipping",
            Axis::Electricity => "electricity",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioLevel<T> {
    Lifespan {
        lifetime_km: T,
    },
    /// A service vehicle here replaces the mode's own.
    Servicing {
        distance_m_per_vkt: T,
        service_vehicle: Option<ServiceVehicle<T>>,
    },
    Shipping {
        route: ShippingRoute<T>,
    },
    Electricity {
        mix: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec<T> {
    pub label: String,
    pub level: ScenarioLevel<T>,
}

impl<T: Scalar> ScenarioSpec<T> {
    pub fn axis(&self) -> Axis {
        match self.level {
            ScenarioLevel::Lifespan { .. } => Axis::Lifespan,
            ScenarioLevel::Servicing { .. } => Axis::Servicing,
            ScenarioLevel::Shipping { .. } => Axis::Shipping,
            ScenarioLevel::Electricity { .. } => Axis::Electricity,
        }
    }

    pub fn lifespan(label: impl Into<String>, lifetime_km: T) -> Self {
        ScenarioSpec {
            label: label.into(),
            level: ScenarioLevel::Lifespan { lifetime_km },
        }
    }

    pub fn servicing(label: impl Into<String>, distance_m_per_vkt: T) -> Self {
        ScenarioSpec {
            label: label.into(),
            level: ScenarioLevel::Servicing {
                distance_m_per_vkt,
                service_vehicle: None,
            },
        }
    }

    pub fn electricity(mix: impl Into<String>) -> Self {
        let mix = mix.into();
        ScenarioSpec {
            label: mix.clone(),
            level: ScenarioLevel::Electricity { mix },
        }
    }

    pub fn shipping(route: ShippingRoute<T>) -> Self {
        ScenarioSpec {
            label: route.route_id.clone(),
            level: ScenarioLevel::Shipping { route },
        }
    }
}

/// Everything a scenario evaluation reads besides the mode.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioContext<'a, T> {
    pub assets: &'a BTreeMap<String, InfrastructureAsset<T>>,
    pub energy: &'a EnergyData<T>,
    pub cf: &'a CharacterizationFactorSet<T>,
    pub freight: &'a FreightFactors<T>,
}

impl<T: Scalar> ScenarioContext<'_, T> {
    pub fn assess(&self, mode: &TransportMode<T>) -> Result<AssessmentResult<T>> {
        modal_impact(mode, self.assets, self.energy, self.cf)
    }
}

/// Returns a copy of `mode` with one axis changed.
pub fn apply_scenario<T: Scalar>(
    mode: &TransportMode<T>,
    spec: &ScenarioSpec<T>,
    freight: &FreightFactors<T>,
) -> Result<TransportMode<T>> {
    let mut out = mode.clone();
    match &spec.level {
        ScenarioLevel::Lifespan { lifetime_km } => {
            if !(*lifetime_km > T::zero()) {
                return Err(Error::InvalidScenario(format!(
                    "lifespan `{}` must be positive",
                    spec.label
                )));
            }
            out.vehicle.lifetime_km = *lifetime_km;
        }
        ScenarioLevel::Servicing {
            distance_m_per_vkt,
            service_vehicle,
        } => {
            if mode.ownership != Ownership::Shared || !mode.servicing.applicable {
                return Err(Error::InvalidScenario(format!(
                    "servicing axis needs a shared mode, `{}` is private",
                    mode.id
                )));
            }
            if !(*distance_m_per_vkt >= T::zero()) {
                return Err(Error::InvalidScenario(format!(
                    "servicing distance `{}` must be nonnegative",
                    spec.label
                )));
            }
            out.servicing.distance_m_per_vkt = *distance_m_per_vkt;
            if let Some(sv) = service_vehicle {
                out.servicing.vehicle = Some(sv.clone());
            }
        }
        ScenarioLevel::Shipping { route } => {
            route.validate()?;
            let per_tonne = route.burden_per_tonne(freight)?;
            let kg_to_t = T::lit(1e-3);
            out.vehicle.lifecycle_impact += per_tonne * (out.vehicle.mass_kg * kg_to_t);
            for variant in &mut out.vehicle.fleet {
                variant.lifecycle_impact += per_tonne * (variant.mass_kg * kg_to_t);
            }
        }
        ScenarioLevel::Electricity { mix } => {
            out.use_stage = out.use_stage.with_mix(mix);
            if let Some(sv) = &mut out.servicing.vehicle {
                sv.use_stage = sv.use_stage.with_mix(mix);
            }
        }
    }
    Ok(out)
}

/// One assessment per level, in input order. Levels are evaluated in
/// parallel.
pub fn sweep<T: Scalar>(
    mode: &TransportMode<T>,
    levels: &[ScenarioSpec<T>],
    ctx: &ScenarioContext<'_, T>,
) -> Result<Vec<AssessmentResult<T>>> {
    if levels.is_empty() {
        return Err(Error::InvalidScenario("sweep needs at least one level".into()));
    }
    levels
        .par_iter()
        .map(|spec| {
            let scenario_mode = apply_scenario(mode, spec, ctx.freight)?;
            let mut result = ctx.assess(&scenario_mode)?;
            result.scenario = Some(spec.label.clone());
            Ok(result)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Breakeven<T> {
    Attained {
        lifetime_km: T,
        /// Per-pkt terms that do not depend on lifetime mileage.
        fixed_per_pkt: T,
        /// Per-vehicle lifecycle impact divided by occupancy.
        vehicle_lifecycle: T,
    },
    Unattainable {
        fixed_per_pkt: T,
        target: T,
    },
}

fn fixed_and_vehicle<T: Scalar>(mode: &TransportMode<T>, k: Indicator, ctx: &ScenarioContext<'_, T>) -> Result<(T, T)> {
    let r = ctx.assess(mode)?;
    let fixed = r.total[k] - r.vehicle[k];
    Ok((fixed, mode.vehicle.lifecycle_impact[k] / mode.occupancy))
}

/// Lifetime mileage at which the mode's impact equals `target`:
/// `L* = EI_1veh / (target − fixed)`.
pub fn breakeven_mileage<T: Scalar>(
    mode: &TransportMode<T>,
    k: Indicator,
    target: T,
    ctx: &ScenarioContext<'_, T>,
) -> Result<Breakeven<T>> {
    let (fixed, vehicle) = fixed_and_vehicle(mode, k, ctx)?;
    if !(vehicle > T::zero()) {
        return Err(Error::Domain(format!("mode `{}` has no vehicle term on {k}", mode.id)));
    }
    if target <= fixed {
        return Ok(Breakeven::Unattainable {
            fixed_per_pkt: fixed,
            target,
        });
    }
    Ok(Breakeven::Attained {
        lifetime_km: vehicle / (target - fixed),
        fixed_per_pkt: fixed,
        vehicle_lifecycle: vehicle,
    })
}

/// Impact on indicator `k` with the lifetime mileage set to `lifetime_km`.
pub fn lifespan_asymptote<T: Scalar>(
    mode: &TransportMode<T>,
    k: Indicator,
    lifetime_km: T,
    ctx: &ScenarioContext<'_, T>,
) -> Result<T> {
    let spec = ScenarioSpec::lifespan("asymptote", lifetime_km);
    let m = apply_scenario(mode, &spec, ctx.freight)?;
    Ok(ctx.assess(&m)?.total[k])
}
