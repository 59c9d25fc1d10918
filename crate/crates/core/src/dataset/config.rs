//! TOML configuration: mode definitions and derivation parameters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::impact::Indicator;
use crate::mode::Ownership;
use crate::{Error, Result};

fn check_header(text: &str, file: &str, kind: &str) -> Result<()> {
    let expected = format!("# modal-lca {kind} v1");
    let first = text.lines().next().unwrap_or("").trim();
    if first != expected {
        return Err(Error::Schema {
            file: file.to_string(),
            found: first.to_string(),
            expected,
        });
    }
    Ok(())
}

fn parse_toml<D: serde::de::DeserializeOwned>(text: &str, file: &str, kind: &str) -> Result<D> {
    check_header(text, file, kind)?;
    toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start.min(text.len())].lines().count() as u64);
        Error::parse(file, line.max(1), e.message().to_string())
    })
}

fn write_toml<S: Serialize>(value: &S, kind: &str) -> String {
    let body = toml::to_string(value).expect("configuration serializes");
    format!("# modal-lca {kind} v1\n\n{body}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "carrier", rename_all = "lowercase", deny_unknown_fields)]
pub enum UseConfig {
    None,
    Electricity {
        /// kWh per vehicle-kilometre.
        consumption: f64,
        mix: String,
    },
    Gasoline {
        /// kg of fuel per vehicle-kilometre.
        consumption: f64,
        fuel: String,
        /// Tailpipe emissions in g/vkt keyed by flow.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tailpipe: Option<BTreeMap<String, f64>>,
        /// Emission-factor file to read the tailpipe map from instead.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tailpipe_table: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceVehicleConfig {
    pub label: String,
    pub mass_kg: f64,
    pub lifetime_km: f64,
    pub lifecycle: BTreeMap<Indicator, f64>,
    #[serde(rename = "use")]
    pub use_stage: UseConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LciReference {
    pub product: String,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FleetConfig {
    pub variant: String,
    pub share: f64,
    pub mass_kg: f64,
    /// Lifecycle impact relative to the first variant.
    pub relative_impact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfig {
    pub id: String,
    pub lifetime_km: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lci: Option<LciReference>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fleet: Vec<FleetConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServicingConfig {
    pub distance_m_per_vkt: f64,
    pub vehicle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub id: String,
    pub label: String,
    pub ownership: Ownership,
    pub occupancy: f64,
    pub infrastructure: Vec<String>,
    pub vehicle: VehicleConfig,
    #[serde(rename = "use")]
    pub use_stage: UseConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub servicing: Option<ServicingConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModesFile {
    #[serde(default)]
    pub service_vehicles: BTreeMap<String, ServiceVehicleConfig>,
    #[serde(default)]
    pub modes: Vec<ModeConfig>,
}

impl ModesFile {
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let parsed: ModesFile = parse_toml(text, file, "modes")?;
        let mut seen = std::collections::BTreeSet::new();
        for m in &parsed.modes {
            if !seen.insert(m.id.as_str()) {
                return Err(Error::Configuration(format!("{file}: duplicate mode `{}`", m.id)));
            }
            if let Some(s) = &m.servicing {
                if !parsed.service_vehicles.contains_key(&s.vehicle) {
                    return Err(Error::dangling(
                        format!("{file}: mode `{}`", m.id),
                        "service vehicle",
                        &s.vehicle,
                    ));
                }
            }
        }
        Ok(parsed)
    }

    pub fn write(&self) -> String {
        write_toml(self, "modes")
    }

    pub fn mode(&self, id: &str) -> Option<&ModeConfig> {
        self.modes.iter().find(|m| m.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedBikeLifetimeParams {
    pub contract_months: f64,
    pub bikes_manufactured: f64,
    pub bikes_operated: f64,
    pub annual_km: f64,
    pub lifespan_months_rounded: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationEnergyParams {
    pub base_kwh: f64,
    pub base_docks: f64,
    pub total_docks: f64,
    pub stations: f64,
    pub low_consumption_kwh: f64,
    pub printed_per_station_kwh: f64,
    pub printed_network_label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationAllocationParams {
    pub bikes: f64,
    pub annual_km: f64,
    pub printed_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FleetServicingParams {
    pub vans: f64,
    pub km_per_day_per_van: f64,
    pub vehicles: f64,
    pub km_per_year_per_vehicle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickupServicingParams {
    pub lcv_trip_km: f64,
    pub vehicles_per_trip: f64,
    pub km_between_pickups: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServicingParams {
    pub shared_bike: FleetServicingParams,
    pub shared_emoped: FleetServicingParams,
    pub shared_es: PickupServicingParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailpipeCorrectionParams {
    pub baseline_l_per_100km: f64,
    pub baseline_g_per_km: f64,
    pub petrol_density_kg_per_l: f64,
    pub moped_l_per_100km: f64,
    pub motorcycle_l_per_100km: f64,
    pub moped_share: f64,
    pub motorcycle_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub shared_bike_lifetime: SharedBikeLifetimeParams,
    pub station_energy: StationEnergyParams,
    pub station_allocation: StationAllocationParams,
    pub servicing: ServicingParams,
    pub tailpipe_correction: TailpipeCorrectionParams,
}

impl Parameters {
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        parse_toml(text, file, "parameters")
    }

    pub fn write(&self) -> String {
        write_toml(self, "parameters")
    }
}
