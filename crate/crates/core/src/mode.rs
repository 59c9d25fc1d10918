//! Per passenger-kilometre impact of a transport mode:
//!
//! `EI = EI_1veh/(L·occ) + EI_use/occ + EI_servicing/occ + Σ_j (1/occ)(1/VKT_j) q_j EI_1u_j`

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::impact::{CharacterizationFactorSet, ImpactVector, Indicator, INDICATORS};
use crate::lci::FlowId;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ownership {
    Shared,
    Private,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FleetVariant<T> {
    pub variant: String,
    /// Share of fleet kilometres travelled with this variant.
    pub share: T,
    pub mass_kg: T,
    pub lifecycle_impact: ImpactVector<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleComponent<T> {
    pub vehicle_id: String,
    pub mass_kg: T,
    pub lifetime_km: T,
    /// Manufacturing, maintenance and end of life for one vehicle.
    pub lifecycle_impact: ImpactVector<T>,
    pub fleet: Vec<FleetVariant<T>>,
}

impl<T: Scalar> VehicleComponent<T> {
    pub fn new(
        vehicle_id: impl Into<String>,
        mass_kg: T,
        lifetime_km: T,
        lifecycle_impact: ImpactVector<T>,
    ) -> Result<Self> {
        let vc = VehicleComponent {
            vehicle_id: vehicle_id.into(),
            mass_kg,
            lifetime_km,
            lifecycle_impact,
            fleet: Vec::new(),
        };
        vc.validate()?;
        Ok(vc)
    }

    /// Mixed fleet: lifecycle impact and mass are the kilometre-share
    /// weighted means of the variants.
    pub fn with_fleet(vehicle_id: impl Into<String>, lifetime_km: T, fleet: Vec<FleetVariant<T>>) -> Result<Self> {
        let lifecycle_impact = fleet
            .iter()
            .fold(ImpactVector::zero(), |acc, v| acc + v.lifecycle_impact * v.share);
        let mass_kg = fleet.iter().map(|v| v.share * v.mass_kg).sum();
        let vc = VehicleComponent {
            vehicle_id: vehicle_id.into(),
            mass_kg,
            lifetime_km,
            lifecycle_impact,
            fleet,
        };
        vc.validate()?;
        Ok(vc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lifetime_km > T::zero()) {
            return Err(Error::Domain(format!(
                "vehicle `{}` lifetime mileage must be positive",
                self.vehicle_id
            )));
        }
        if !self.fleet.is_empty() {
            let total: T = self.fleet.iter().map(|v| v.share).sum();
            if (total - T::one()).abs() > T::lit(1e-6) || self.fleet.iter().any(|v| v.share < T::zero()) {
                return Err(Error::Domain(format!(
                    "vehicle `{}` fleet shares sum to {total}, not 1",
                    self.vehicle_id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyCarrier {
    Electricity,
    Gasoline,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UseStage<T> {
    /// Human powered or otherwise outside the accounting.
    None,
    Electricity {
        kwh_per_vkt: T,
        mix: String,
    },
    /// Combustion of a liquid fuel; tailpipe amounts in g/vkt.
    Gasoline {
        fuel_kg_per_vkt: T,
        fuel: String,
        tailpipe_g_per_vkt: BTreeMap<FlowId, T>,
    },
}

impl<T: Scalar> UseStage<T> {
    pub fn carrier(&self) -> EnergyCarrier {
        match self {
            UseStage::None => EnergyCarrier::None,
            UseStage::Electricity { .. } => EnergyCarrier::Electricity,
            UseStage::Gasoline { .. } => EnergyCarrier::Gasoline,
        }
    }

    pub fn consumption(&self) -> T {
        match self {
            UseStage::None => T::zero(),
            UseStage::Electricity { kwh_per_vkt, .. } => *kwh_per_vkt,
            UseStage::Gasoline { fuel_kg_per_vkt, .. } => *fuel_kg_per_vkt,
        }
    }

    /// Same stage charged on another mix; non-electric stages are unchanged.
    pub fn with_mix(&self, mix_id: &str) -> Self {
        match self {
            UseStage::Electricity { kwh_per_vkt, .. } => UseStage::Electricity {
                kwh_per_vkt: *kwh_per_vkt,
                mix: mix_id.to_string(),
            },
            other => other.clone(),
        }
    }
}

/// Per-unit impacts of energy carriers: electricity per kWh, fuels per kg
/// (production only).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyData<T> {
    pub mixes: BTreeMap<String, ImpactVector<T>>,
    pub fuels: BTreeMap<String, ImpactVector<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceVehicle<T> {
    pub id: String,
    pub label: String,
    pub vehicle: VehicleComponent<T>,
    pub use_stage: UseStage<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServicingSpec<T> {
    pub distance_m_per_vkt: T,
    pub vehicle: Option<ServiceVehicle<T>>,
    pub applicable: bool,
}

impl<T: Scalar> ServicingSpec<T> {
    pub fn not_applicable() -> Self {
        ServicingSpec {
            distance_m_per_vkt: T::zero(),
            vehicle: None,
            applicable: false,
        }
    }

    pub fn shared(distance_m_per_vkt: T, vehicle: ServiceVehicle<T>) -> Self {
        ServicingSpec {
            distance_m_per_vkt,
            vehicle: Some(vehicle),
            applicable: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfrastructureAsset<T> {
    pub id: String,
    pub kind: String,
    /// Network quantity `q_j`.
    pub quantity: T,
    pub quantity_unit: String,
    /// `EI_1u_j`, per unit of quantity and per year.
    pub annual_impact_per_unit: ImpactVector<T>,
    /// `VKT_j`, all user classes.
    pub annual_vkt: T,
    pub allocation_override: Option<T>,
}

impl<T: Scalar> InfrastructureAsset<T> {
    /// Per-vkt share of the asset's annual network impact.
    pub fn impact_per_vkt(&self) -> Result<ImpactVector<T>> {
        Ok(self.annual_impact_per_unit * (self.quantity * allocation_factor(self)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportMode<T> {
    pub id: String,
    pub label: String,
    pub ownership: Ownership,
    pub vehicle: VehicleComponent<T>,
    pub use_stage: UseStage<T>,
    pub servicing: ServicingSpec<T>,
    pub infrastructure: Vec<String>,
    pub occupancy: T,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Vehicle,
    Use,
    Servicing,
    Infrastructure(String),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Vehicle => f.write_str("vehicle"),
            Component::Use => f.write_str("use"),
            Component::Servicing => f.write_str("servicing"),
            Component::Infrastructure(id) => write!(f, "infra:{id}"),
        }
    }
}

impl std::str::FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "vehicle" => Component::Vehicle,
            "use" => Component::Use,
            "servicing" => Component::Servicing,
            other => match other.strip_prefix("infra:") {
                Some(id) if !id.is_empty() => Component::Infrastructure(id.to_string()),
                _ => return Err(Error::Configuration(format!("unknown component `{other}`"))),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentResult<T> {
    pub mode_id: String,
    /// Scenario label when the result comes from a sweep.
    pub scenario: Option<String>,
    pub total: ImpactVector<T>,
    pub vehicle: ImpactVector<T>,
    pub use_stage: ImpactVector<T>,
    pub servicing: ImpactVector<T>,
    pub infrastructure: Vec<(String, ImpactVector<T>)>,
    pub notices: Vec<String>,
}

impl<T: Scalar> AssessmentResult<T> {
    pub fn components(&self) -> Vec<(Component, ImpactVector<T>)> {
        let mut out = vec![
            (Component::Vehicle, self.vehicle),
            (Component::Use, self.use_stage),
            (Component::Servicing, self.servicing),
        ];
        out.extend(
            self.infrastructure
                .iter()
                .map(|(id, v)| (Component::Infrastructure(id.clone()), *v)),
        );
        out
    }

    pub fn infrastructure_total(&self) -> ImpactVector<T> {
        self.infrastructure
            .iter()
            .fold(ImpactVector::zero(), |acc, (_, v)| acc + *v)
    }
}

/// `1/VKT_j`, or the override when set.
pub fn allocation_factor<T: Scalar>(asset: &InfrastructureAsset<T>) -> Result<T> {
    if let Some(f) = asset.allocation_override {
        return Ok(f);
    }
    if !(asset.annual_vkt > T::zero()) {
        return Err(Error::ZeroTraffic {
            asset: asset.id.clone(),
        });
    }
    Ok(T::one() / asset.annual_vkt)
}

/// Per-vehicle lifecycle impact over `lifetime_km × occupancy`.
pub fn vehicle_amortization<T: Scalar>(vc: &VehicleComponent<T>, occupancy: T) -> Result<ImpactVector<T>> {
    if !(vc.lifetime_km > T::zero()) {
        return Err(Error::Domain(format!(
            "vehicle `{}` lifetime mileage must be positive",
            vc.vehicle_id
        )));
    }
    if !(occupancy > T::zero()) {
        return Err(Error::Domain("occupancy must be positive".into()));
    }
    Ok(vc.lifecycle_impact / (vc.lifetime_km * occupancy))
}

/// Use-stage impact per vehicle-kilometre.
pub fn use_stage_impact<T: Scalar>(
    use_stage: &UseStage<T>,
    energy: &EnergyData<T>,
    cf: &CharacterizationFactorSet<T>,
) -> Result<ImpactVector<T>> {
    match use_stage {
        UseStage::None => Ok(ImpactVector::zero()),
        UseStage::Electricity { kwh_per_vkt, mix } => {
            if *kwh_per_vkt < T::zero() {
                return Err(Error::Domain("consumption must be nonnegative".into()));
            }
            let per_kwh = energy
                .mixes
                .get(mix)
                .ok_or_else(|| Error::Configuration(format!("unknown electricity mix `{mix}`")))?;
            Ok(*per_kwh * *kwh_per_vkt)
        }
        UseStage::Gasoline {
            fuel_kg_per_vkt,
            fuel,
            tailpipe_g_per_vkt,
        } => {
            if *fuel_kg_per_vkt < T::zero() {
                return Err(Error::Domain("consumption must be nonnegative".into()));
            }
            let per_kg = energy
                .fuels
                .get(fuel)
                .ok_or_else(|| Error::Configuration(format!("unknown fuel `{fuel}`")))?;
            Ok(cf.characterize_grams(tailpipe_g_per_vkt) + *per_kg * *fuel_kg_per_vkt)
        }
    }
}

/// Per-kilometre impact of a service vehicle.
pub fn service_vehicle_per_km<T: Scalar>(
    sv: &ServiceVehicle<T>,
    energy: &EnergyData<T>,
    cf: &CharacterizationFactorSet<T>,
) -> Result<ImpactVector<T>> {
    Ok(vehicle_amortization(&sv.vehicle, T::one())? + use_stage_impact(&sv.use_stage, energy, cf)?)
}

/// Servicing impact per vehicle-kilometre of the serviced mode, with a
/// notice when servicing does not apply.
pub fn servicing_impact<T: Scalar>(
    spec: &ServicingSpec<T>,
    energy: &EnergyData<T>,
    cf: &CharacterizationFactorSet<T>,
) -> Result<(ImpactVector<T>, Option<String>)> {
    if !spec.applicable {
        return Ok((ImpactVector::zero(), Some("servicing not applicable".into())));
    }
    if spec.distance_m_per_vkt < T::zero() {
        return Err(Error::Domain("servicing distance must be nonnegative".into()));
    }
    let sv = spec
        .vehicle
        .as_ref()
        .ok_or_else(|| Error::Configuration("servicing applies but no service vehicle is set".into()))?;
    let per_km = service_vehicle_per_km(sv, energy, cf)?;
    Ok((per_km * (spec.distance_m_per_vkt / T::lit(1000.0)), None))
}

/// Evaluates the modal formula with its per-component breakdown.
pub fn modal_impact<T: Scalar>(
    mode: &TransportMode<T>,
    assets: &BTreeMap<String, InfrastructureAsset<T>>,
    energy: &EnergyData<T>,
    cf: &CharacterizationFactorSet<T>,
) -> Result<AssessmentResult<T>> {
    if !(mode.occupancy >= T::one()) {
        return Err(Error::Domain(format!(
            "mode `{}` occupancy must be at least 1",
            mode.id
        )));
    }
    let mut unresolved = Vec::new();
    for id in &mode.infrastructure {
        if !assets.contains_key(id) {
            unresolved.push(format!("infrastructure `{id}`"));
        }
    }
    let mut check_use = |u: &UseStage<T>| match u {
        UseStage::Electricity { mix, .. } if !energy.mixes.contains_key(mix) => {
            unresolved.push(format!("electricity mix `{mix}`"))
        }
        UseStage::Gasoline { fuel, .. } if !energy.fuels.contains_key(fuel) => {
            unresolved.push(format!("fuel `{fuel}`"))
        }
        _ => {}
    };
    check_use(&mode.use_stage);
    if mode.servicing.applicable {
        match &mode.servicing.vehicle {
            Some(sv) => check_use(&sv.use_stage),
            None => unresolved.push("service vehicle".into()),
        }
    }
    if !unresolved.is_empty() {
        return Err(Error::Assessment {
            mode: mode.id.clone(),
            unresolved,
        });
    }

    let occ = mode.occupancy;
    let mut notices = Vec::new();
    let vehicle = vehicle_amortization(&mode.vehicle, occ)?;
    let use_stage = use_stage_impact(&mode.use_stage, energy, cf)? / occ;
    let (servicing, notice) = servicing_impact(&mode.servicing, energy, cf)?;
    let servicing = servicing / occ;
    notices.extend(notice);
    let mut infrastructure = Vec::with_capacity(mode.infrastructure.len());
    for id in &mode.infrastructure {
        infrastructure.push((id.clone(), assets[id].impact_per_vkt()? / occ));
    }

    let mut total = vehicle + use_stage + servicing;
    for (_, v) in &infrastructure {
        total += *v;
    }
    Ok(AssessmentResult {
        mode_id: mode.id.clone(),
        scenario: None,
        total,
        vehicle,
        use_stage,
        servicing,
        infrastructure,
        notices,
    })
}

/// Component shares of the total, per indicator. `None` marks an indicator
/// whose total is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Contributions<T> {
    pub mode_id: String,
    pub shares: BTreeMap<Indicator, Option<Vec<(Component, T)>>>,
    pub notices: Vec<String>,
}

pub fn contribution_breakdown<T: Scalar>(result: &AssessmentResult<T>) -> Contributions<T> {
    let components = result.components();
    let mut shares = BTreeMap::new();
    let mut notices = Vec::new();
    for k in INDICATORS {
        let total = result.total[k];
        if total == T::zero() {
            notices.push(format!("{k}: total is zero, shares undefined"));
            shares.insert(k, None);
            continue;
        }
        shares.insert(
            k,
            Some(components.iter().map(|(c, v)| (c.clone(), v[k] / total)).collect()),
        );
    }
    Contributions {
        mode_id: result.mode_id.clone(),
        shares,
        notices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gwp(v: f64) -> ImpactVector<f64> {
        let mut iv = ImpactVector::zero();
        iv[Indicator::Gwp100] = v;
        iv
    }

    #[test]
    fn ebike_amortization_examples() {
        let vc = VehicleComponent::new("ebike", 27.0, 12_500.0, gwp(320.0)).unwrap();
        assert!((vehicle_amortization(&vc, 1.0).unwrap()[Indicator::Gwp100] - 0.0256).abs() < 1e-15);
        let vc = VehicleComponent {
            lifetime_km: 20_000.0,
            ..vc
        };
        assert!((vehicle_amortization(&vc, 1.0).unwrap()[Indicator::Gwp100] - 0.016).abs() < 1e-15);
        let zero = VehicleComponent::new("z", 1.0, 10.0, ImpactVector::zero()).unwrap();
        assert!(vehicle_amortization(&zero, 1.0).unwrap().is_zero());
    }

    #[test]
    fn nonpositive_mileage_is_a_domain_error() {
        assert!(matches!(
            VehicleComponent::new("v", 1.0, 0.0, gwp(1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mixed_fleet_weights_by_kilometres() {
        let fleet = vec![
            FleetVariant {
                variant: "mechanical".into(),
                share: 0.5,
                mass_kg: 20.6,
                lifecycle_impact: gwp(100.0),
            },
            FleetVariant {
                variant: "electric".into(),
                share: 0.5,
                mass_kg: 27.0,
                lifecycle_impact: gwp(124.0),
            },
        ];
        let vc = VehicleComponent::with_fleet("bike", 10.0, fleet.clone()).unwrap();
        assert_eq!(vc.lifecycle_impact[Indicator::Gwp100], 112.0);
        assert!((vc.mass_kg - 23.8).abs() < 1e-12);
        let mut bad = fleet;
        bad[0].share = 0.7;
        assert!(VehicleComponent::with_fleet("bike", 10.0, bad).is_err());
    }

    #[test]
    fn emoped_use_on_low_carbon_mix() {
        let mut energy = EnergyData::default();
        energy.mixes.insert("X".into(), gwp(0.05));
        let u = UseStage::Electricity {
            kwh_per_vkt: 0.033,
            mix: "X".into(),
        };
        let v = use_stage_impact(&u, &energy, &CharacterizationFactorSet::new()).unwrap();
        assert!((v[Indicator::Gwp100] - 1.65e-3).abs() < 1e-15);
        let unknown = UseStage::Electricity {
            kwh_per_vkt: 0.033,
            mix: "Y".into(),
        };
        assert!(matches!(
            use_stage_impact(&unknown, &energy, &CharacterizationFactorSet::new()),
            Err(Error::Configuration(_))
        ));
        let human: UseStage<f64> = UseStage::None;
        assert!(use_stage_impact(&human, &energy, &CharacterizationFactorSet::new())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn allocation_factor_cases() {
        let mut asset = InfrastructureAsset {
            id: "a".into(),
            kind: "pavement".into(),
            quantity: 1.0,
            quantity_unit: "m2".into(),
            annual_impact_per_unit: gwp(1.0),
            annual_vkt: 1.0,
            allocation_override: None,
        };
        assert_eq!(allocation_factor(&asset).unwrap(), 1.0);
        asset.annual_vkt = 0.0;
        assert!(matches!(allocation_factor(&asset), Err(Error::ZeroTraffic { .. })));
        asset.allocation_override = Some(5.26e-9);
        assert_eq!(allocation_factor(&asset).unwrap(), 5.26e-9);
    }

    #[test]
    fn private_servicing_is_zero_with_notice() {
        let (v, notice) = servicing_impact::<f64>(
            &ServicingSpec::not_applicable(),
            &EnergyData::default(),
            &CharacterizationFactorSet::new(),
        )
        .unwrap();
        assert!(v.is_zero());
        assert!(notice.is_some());
    }

    #[test]
    fn component_ids_round_trip() {
        for c in [
            Component::Vehicle,
            Component::Use,
            Component::Servicing,
            Component::Infrastructure("pavement".into()),
        ] {
            assert_eq!(c.to_string().parse::<Component>().unwrap(), c);
        }
    }
}
