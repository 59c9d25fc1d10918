//! Bundled data: parsing, validation, derived inputs and construction of
//! assessable modes.
//!
//! Two construction paths share the same mode definitions:
//!
//! * the calibrated path takes per-pkt component values from
//!   `calibrated_components.csv` and computes use and servicing physically;
//! * the full path runs infrastructure (and any vehicle with an `lci`
//!   reference) through the background database and the matrix core.

pub mod config;
mod csvio;
pub mod derive;
pub mod files;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub use config::{ModeConfig, ModesFile, Parameters, ServiceVehicleConfig, UseConfig};
pub use derive::{
    correct_tailpipe, derive_private_bike_lifetime, derive_servicing_distance, es_pickup_distance,
    prorate_station_energy, shared_bike_lifetime, station_allocation, PrivateBikeLifetime, SharedBikeLifetime,
    StationEnergy, TailpipeCorrection,
};
pub use files::*;

use crate::impact::{apply_all, CharacterizationFactorSet, ImpactVector, INDICATORS};
use crate::lci::{BackgroundDatabase, FlowId};
use crate::mode::{
    modal_impact, AssessmentResult, Component, EnergyData, FleetVariant, InfrastructureAsset, ServiceVehicle,
    ServicingSpec, TransportMode, UseStage, VehicleComponent,
};
use crate::scenario::{Axis, FreightFactors, FreightMode, ScenarioContext, ScenarioLevel, ScenarioSpec};
use crate::{Error, Result, Scalar};

pub const FLOWS: &str = "flows.csv";
pub const PROCESSES: &str = "processes.csv";
pub const CFS: &str = "cfs.csv";
pub const TRAFFIC: &str = "traffic.csv";
pub const INFRASTRUCTURE: &str = "infrastructure.csv";
pub const MIXES: &str = "mixes.csv";
pub const FUELS: &str = "fuels.csv";
pub const FREIGHT: &str = "freight.csv";
pub const HBEFA: &str = "hbefa.csv";
pub const SURVEY_AGE: &str = "survey_age.csv";
pub const SURVEY_USAGE: &str = "survey_usage.csv";
pub const CALIBRATED: &str = "calibrated_components.csv";
pub const SCENARIOS_LIFESPAN: &str = "scenarios_lifespan.csv";
pub const SCENARIOS_SERVICING: &str = "scenarios_servicing.csv";
pub const SCENARIOS_SHIPPING: &str = "scenarios_shipping.csv";
pub const REFERENCES: &str = "references.csv";
pub const MODES: &str = "modes.toml";
pub const PARAMETERS: &str = "parameters.toml";

/// Every file a data directory must contain.
pub const FILES: [&str; 18] = [
    FLOWS,
    PROCESSES,
    CFS,
    TRAFFIC,
    INFRASTRUCTURE,
    MIXES,
    FUELS,
    FREIGHT,
    HBEFA,
    SURVEY_AGE,
    SURVEY_USAGE,
    CALIBRATED,
    SCENARIOS_LIFESPAN,
    SCENARIOS_SERVICING,
    SCENARIOS_SHIPPING,
    REFERENCES,
    MODES,
    PARAMETERS,
];

pub const AGE_COLUMN: &str = "lifetime_years";
pub const USAGE_COLUMN: &str = "annual_km";

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    pub dir: Option<PathBuf>,
    pub database: BackgroundDatabase<T>,
    pub cf: CharacterizationFactorSet<T>,
    pub traffic: Vec<TrafficRow<T>>,
    pub infrastructure: Vec<InfrastructureLci<T>>,
    pub mixes: Vec<ImpactFactor<T>>,
    pub fuels: Vec<ImpactFactor<T>>,
    pub freight: Vec<ImpactFactor<T>>,
    pub hbefa: Vec<HbefaRow<T>>,
    pub survey_age: SurveyTable<T>,
    pub survey_usage: SurveyTable<T>,
    pub calibrated: CalibratedComponentTable<T>,
    pub lifespan_levels: Vec<LifespanLevel<T>>,
    pub servicing_levels: Vec<ServicingLevel<T>>,
    pub shipping_routes: Vec<ShippingRouteSpec<T>>,
    pub references: ReferenceModeSet<T>,
    pub modes: ModesFile,
    pub parameters: Parameters,
}

/// A mode with everything needed to assess it and sweep its scenarios.
#[derive(Debug, Clone)]
pub struct Evaluation<T> {
    pub mode: TransportMode<T>,
    pub assets: BTreeMap<String, InfrastructureAsset<T>>,
    pub energy: EnergyData<T>,
    pub cf: CharacterizationFactorSet<T>,
    pub freight: FreightFactors<T>,
}

impl<T: Scalar> Evaluation<T> {
    pub fn context(&self) -> ScenarioContext<'_, T> {
        ScenarioContext {
            assets: &self.assets,
            energy: &self.energy,
            cf: &self.cf,
            freight: &self.freight,
        }
    }

    pub fn assess(&self) -> Result<AssessmentResult<T>> {
        modal_impact(&self.mode, &self.assets, &self.energy, &self.cf)
    }
}

fn read_file(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
}

impl<T: Scalar> Dataset<T> {
    /// Loads and cross-checks every file in `dir`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut texts = BTreeMap::new();
        for name in FILES {
            texts.insert(name, read_file(dir, name)?);
        }
        let mut ds = Self::from_texts(|name| texts[name].as_str())?;
        ds.dir = Some(dir.to_path_buf());
        Ok(ds)
    }

    pub fn load_bundled() -> Result<Self> {
        Self::load(crate::bundled_data_dir())
    }

    /// Parses a dataset from file contents looked up by file name.
    pub fn from_texts<'a>(text: impl Fn(&str) -> &'a str) -> Result<Self> {
        let flows = parse_flows(text(FLOWS), FLOWS)?;
        let processes = parse_processes(text(PROCESSES), PROCESSES, &flows)?;
        let database = BackgroundDatabase::new(flows, processes)?;
        let cf = load_method(text(CFS), CFS, &database)?;
        let ds = Dataset {
            dir: None,
            cf,
            traffic: parse_traffic(text(TRAFFIC), TRAFFIC)?,
            infrastructure: parse_infrastructure(text(INFRASTRUCTURE), INFRASTRUCTURE, &database)?,
            mixes: parse_mixes(text(MIXES), MIXES)?,
            fuels: parse_fuels(text(FUELS), FUELS)?,
            freight: parse_freight(text(FREIGHT), FREIGHT)?,
            hbefa: parse_hbefa(text(HBEFA), HBEFA)?,
            survey_age: parse_survey(text(SURVEY_AGE), SURVEY_AGE, AGE_COLUMN)?,
            survey_usage: parse_survey(text(SURVEY_USAGE), SURVEY_USAGE, USAGE_COLUMN)?,
            calibrated: parse_calibrated(text(CALIBRATED), CALIBRATED)?,
            lifespan_levels: parse_lifespan_levels(text(SCENARIOS_LIFESPAN), SCENARIOS_LIFESPAN)?,
            servicing_levels: parse_servicing_levels(text(SCENARIOS_SERVICING), SCENARIOS_SERVICING)?,
            shipping_routes: parse_shipping_routes(text(SCENARIOS_SHIPPING), SCENARIOS_SHIPPING)?,
            references: parse_references(text(REFERENCES), REFERENCES)?,
            modes: ModesFile::parse(text(MODES), MODES)?,
            parameters: Parameters::parse(text(PARAMETERS), PARAMETERS)?,
            database,
        };
        ds.cross_check()?;
        Ok(ds)
    }

    /// Serializes every file back into `dir`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        for (name, body) in self.render() {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }

    /// File name and contents of every serialized file.
    pub fn render(&self) -> Vec<(&'static str, String)> {
        vec![
            (FLOWS, write_flows(self.database.flows())),
            (PROCESSES, write_processes(&self.database)),
            (CFS, write_method(&self.cf, &self.database)),
            (TRAFFIC, write_traffic(&self.traffic)),
            (
                INFRASTRUCTURE,
                write_infrastructure(&self.infrastructure, &self.database),
            ),
            (MIXES, write_mixes(&self.mixes)),
            (FUELS, write_fuels(&self.fuels)),
            (FREIGHT, write_freight(&self.freight)),
            (HBEFA, write_hbefa(&self.hbefa)),
            (SURVEY_AGE, write_survey(&self.survey_age)),
            (SURVEY_USAGE, write_survey(&self.survey_usage)),
            (CALIBRATED, write_calibrated(&self.calibrated)),
            (SCENARIOS_LIFESPAN, write_lifespan_levels(&self.lifespan_levels)),
            (SCENARIOS_SERVICING, write_servicing_levels(&self.servicing_levels)),
            (SCENARIOS_SHIPPING, write_shipping_routes(&self.shipping_routes)),
            (REFERENCES, write_references(&self.references)),
            (MODES, self.modes.write()),
            (PARAMETERS, self.parameters.write()),
        ]
    }

    fn cross_check(&self) -> Result<()> {
        let asset_ids: Vec<&str> = self.infrastructure.iter().map(|a| a.asset_id.as_str()).collect();
        for m in &self.modes.modes {
            let ctx = format!("{MODES}: mode `{}`", m.id);
            for id in &m.infrastructure {
                if !asset_ids.contains(&id.as_str()) {
                    return Err(Error::dangling(ctx.clone(), "infrastructure asset", id));
                }
            }
            self.check_use(&ctx, &m.use_stage)?;
            if let Some(lci) = &m.vehicle.lci {
                let flow = FlowId::from(lci.product.as_str());
                if self.database.producer(&flow).is_none() {
                    return Err(Error::dangling(ctx.clone(), "product", &lci.product));
                }
            }
            for k in INDICATORS {
                if self.calibrated.entry(&m.id, k).is_none() {
                    return Err(Error::Configuration(format!(
                        "{CALIBRATED}: no {k} entry for mode `{}`",
                        m.id
                    )));
                }
            }
        }
        for (id, sv) in &self.modes.service_vehicles {
            self.check_use(&format!("{MODES}: service vehicle `{id}`"), &sv.use_stage)?;
        }
        for l in &self.lifespan_levels {
            if self.modes.mode(&l.mode).is_none() {
                return Err(Error::dangling(SCENARIOS_LIFESPAN, "mode", &l.mode));
            }
        }
        for l in &self.servicing_levels {
            if self.modes.mode(&l.mode).is_none() {
                return Err(Error::dangling(SCENARIOS_SERVICING, "mode", &l.mode));
            }
            if let Some(v) = &l.service_vehicle {
                if !self.modes.service_vehicles.contains_key(v) {
                    return Err(Error::dangling(SCENARIOS_SERVICING, "service vehicle", v));
                }
            }
        }
        for r in &self.shipping_routes {
            r.route().validate()?;
        }
        Ok(())
    }

    fn check_use(&self, ctx: &str, use_stage: &UseConfig) -> Result<()> {
        match use_stage {
            UseConfig::None => Ok(()),
            UseConfig::Electricity { mix, .. } => {
                if self.mixes.iter().any(|m| &m.id == mix) {
                    Ok(())
                } else {
                    Err(Error::dangling(ctx, "electricity mix", mix))
                }
            }
            UseConfig::Gasoline {
                fuel,
                tailpipe,
                tailpipe_table,
                ..
            } => {
                if !self.fuels.iter().any(|f| &f.id == fuel) {
                    return Err(Error::dangling(ctx, "fuel", fuel));
                }
                if let Some(t) = tailpipe_table {
                    if t != HBEFA {
                        return Err(Error::dangling(ctx, "tailpipe table", t));
                    }
                }
                for flow in tailpipe.iter().flat_map(|t| t.keys()) {
                    if self.database.flow(&FlowId::from(flow.as_str())).is_none() {
                        return Err(Error::dangling(ctx, "tailpipe flow", flow));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn mode_ids(&self) -> Vec<&str> {
        self.modes.modes.iter().map(|m| m.id.as_str()).collect()
    }

    fn mode_config(&self, id: &str) -> Result<&ModeConfig> {
        self.modes
            .mode(id)
            .ok_or_else(|| Error::Configuration(format!("unknown mode `{id}` (known: {})", self.mode_ids().join(", "))))
    }

    pub fn energy(&self) -> EnergyData<T> {
        EnergyData {
            mixes: self.mixes.iter().map(|m| (m.id.clone(), m.impact)).collect(),
            fuels: self.fuels.iter().map(|f| (f.id.clone(), f.impact)).collect(),
        }
    }

    pub fn freight_factors(&self) -> FreightFactors<T> {
        self.freight
            .iter()
            .filter_map(|f| f.id.parse::<FreightMode>().ok().map(|m| (m, f.impact)))
            .collect()
    }

    pub fn mix_ids(&self) -> Vec<&str> {
        self.mixes.iter().map(|m| m.id.as_str()).collect()
    }

    fn use_stage(&self, cfg: &UseConfig) -> Result<UseStage<T>> {
        Ok(match cfg {
            UseConfig::None => UseStage::None,
            UseConfig::Electricity { consumption, mix } => UseStage::Electricity {
                kwh_per_vkt: T::lit(*consumption),
                mix: mix.clone(),
            },
            UseConfig::Gasoline {
                consumption,
                fuel,
                tailpipe,
                tailpipe_table,
            } => {
                let mut map: BTreeMap<FlowId, T> = match tailpipe_table {
                    Some(_) => tailpipe_map(&self.hbefa, fuel),
                    None => BTreeMap::new(),
                };
                for (flow, g) in tailpipe.iter().flatten() {
                    let slot = map.entry(FlowId::from(flow.as_str())).or_insert_with(T::zero);
                    *slot = *slot + T::lit(*g);
                }
                UseStage::Gasoline {
                    fuel_kg_per_vkt: T::lit(*consumption),
                    fuel: fuel.clone(),
                    tailpipe_g_per_vkt: map,
                }
            }
        })
    }

    pub fn service_vehicle(&self, id: &str) -> Result<ServiceVehicle<T>> {
        let cfg = self
            .modes
            .service_vehicles
            .get(id)
            .ok_or_else(|| Error::Configuration(format!("unknown service vehicle `{id}`")))?;
        let mut lifecycle = ImpactVector::zero();
        for k in INDICATORS {
            let v = cfg
                .lifecycle
                .get(&k)
                .ok_or_else(|| Error::Configuration(format!("service vehicle `{id}` lacks a {k} lifecycle value")))?;
            lifecycle[k] = T::lit(*v);
        }
        Ok(ServiceVehicle {
            id: id.to_string(),
            label: cfg.label.clone(),
            vehicle: VehicleComponent::new(id, T::lit(cfg.mass_kg), T::lit(cfg.lifetime_km), lifecycle)?,
            use_stage: self.use_stage(&cfg.use_stage)?,
        })
    }

    /// Per-vehicle lifecycle impact that reproduces the calibrated vehicle
    /// component at the base lifetime and occupancy.
    pub fn calibrated_vehicle_lifecycle(&self, mode_id: &str) -> Result<ImpactVector<T>> {
        let cfg = self.mode_config(mode_id)?;
        let per_pkt = self.calibrated.component(mode_id, &Component::Vehicle);
        Ok(per_pkt * (T::lit(cfg.vehicle.lifetime_km) * T::lit(cfg.occupancy)))
    }

    /// Lifecycle impact of the `lci` product through the matrix core.
    pub fn lci_vehicle_lifecycle(&self, mode_id: &str) -> Result<Option<ImpactVector<T>>> {
        let cfg = self.mode_config(mode_id)?;
        let Some(lci) = &cfg.vehicle.lci else {
            return Ok(None);
        };
        let demand = BTreeMap::from([(FlowId::from(lci.product.as_str()), T::lit(lci.amount))]);
        let g = self.database.life_cycle_inventory(&demand)?;
        Ok(Some(apply_all(&g, &self.cf)))
    }

    fn build_mode(&self, cfg: &ModeConfig, lifecycle: ImpactVector<T>) -> Result<TransportMode<T>> {
        let lifetime = T::lit(cfg.vehicle.lifetime_km);
        let vehicle = if cfg.vehicle.fleet.is_empty() {
            VehicleComponent::new(
                cfg.vehicle.id.clone(),
                T::lit(cfg.vehicle.mass_kg.unwrap_or(0.0)),
                lifetime,
                lifecycle,
            )?
        } else {
            let norm: f64 = cfg.vehicle.fleet.iter().map(|v| v.share * v.relative_impact).sum();
            if !(norm > 0.0) {
                return Err(Error::Configuration(format!("mode `{}` fleet has no weight", cfg.id)));
            }
            let fleet = cfg
                .vehicle
                .fleet
                .iter()
                .map(|v| FleetVariant {
                    variant: v.variant.clone(),
                    share: T::lit(v.share),
                    mass_kg: T::lit(v.mass_kg),
                    lifecycle_impact: lifecycle * T::lit(v.relative_impact / norm),
                })
                .collect();
            VehicleComponent::with_fleet(cfg.vehicle.id.clone(), lifetime, fleet)?
        };
        let servicing = match &cfg.servicing {
            Some(s) => ServicingSpec::shared(T::lit(s.distance_m_per_vkt), self.service_vehicle(&s.vehicle)?),
            None => ServicingSpec::not_applicable(),
        };
        Ok(TransportMode {
            id: cfg.id.clone(),
            label: cfg.label.clone(),
            ownership: cfg.ownership,
            vehicle,
            use_stage: self.use_stage(&cfg.use_stage)?,
            servicing,
            infrastructure: cfg.infrastructure.clone(),
            occupancy: T::lit(cfg.occupancy),
        })
    }

    /// Mode on the calibrated path.
    pub fn mode(&self, id: &str) -> Result<TransportMode<T>> {
        let cfg = self.mode_config(id)?;
        self.build_mode(cfg, self.calibrated_vehicle_lifecycle(id)?)
    }

    /// Mode on the full path: the vehicle comes from the background
    /// database when it names a product.
    pub fn physical_mode(&self, id: &str) -> Result<TransportMode<T>> {
        let cfg = self.mode_config(id)?;
        let lifecycle = match self.lci_vehicle_lifecycle(id)? {
            Some(v) => v,
            None => self.calibrated_vehicle_lifecycle(id)?,
        };
        self.build_mode(cfg, lifecycle)
    }

    fn asset_lci(&self, id: &str) -> Result<&InfrastructureLci<T>> {
        self.infrastructure
            .iter()
            .find(|a| a.asset_id == id)
            .ok_or_else(|| Error::Configuration(format!("unknown infrastructure asset `{id}`")))
    }

    /// `VKT_j` for an asset's traffic class.
    pub fn asset_vkt(&self, id: &str) -> Result<T> {
        Ok(annual_vkt(&self.traffic, &self.asset_lci(id)?.traffic_class))
    }

    /// Infrastructure assets that reproduce one mode's calibrated
    /// infrastructure components, with the network quantity and traffic
    /// of the bundled files.
    pub fn calibrated_assets(&self, mode_id: &str) -> Result<BTreeMap<String, InfrastructureAsset<T>>> {
        let cfg = self.mode_config(mode_id)?;
        let occ = T::lit(cfg.occupancy);
        let mut out = BTreeMap::new();
        for id in &cfg.infrastructure {
            let lci = self.asset_lci(id)?;
            let vkt = self.asset_vkt(id)?;
            if !(vkt > T::zero()) {
                return Err(Error::ZeroTraffic { asset: id.clone() });
            }
            let per_pkt = self
                .calibrated
                .component(mode_id, &Component::Infrastructure(id.clone()));
            out.insert(
                id.clone(),
                InfrastructureAsset {
                    id: id.clone(),
                    kind: lci.kind.clone(),
                    quantity: lci.quantity,
                    quantity_unit: lci.quantity_unit.clone(),
                    annual_impact_per_unit: per_pkt * (occ * vkt / lci.quantity),
                    annual_vkt: vkt,
                    allocation_override: None,
                },
            );
        }
        Ok(out)
    }

    /// Annual impact of one functional unit of an asset via the matrix core.
    pub fn asset_unit_impact(&self, id: &str) -> Result<ImpactVector<T>> {
        let g = self.database.life_cycle_inventory(&self.asset_lci(id)?.demand())?;
        Ok(apply_all(&g, &self.cf))
    }

    /// Every infrastructure asset on the full path.
    pub fn physical_assets(&self) -> Result<BTreeMap<String, InfrastructureAsset<T>>> {
        let mut out = BTreeMap::new();
        for lci in &self.infrastructure {
            out.insert(
                lci.asset_id.clone(),
                InfrastructureAsset {
                    id: lci.asset_id.clone(),
                    kind: lci.kind.clone(),
                    quantity: lci.quantity,
                    quantity_unit: lci.quantity_unit.clone(),
                    annual_impact_per_unit: self.asset_unit_impact(&lci.asset_id)?,
                    annual_vkt: annual_vkt(&self.traffic, &lci.traffic_class),
                    allocation_override: None,
                },
            );
        }
        Ok(out)
    }

    pub fn evaluation(&self, mode_id: &str) -> Result<Evaluation<T>> {
        Ok(Evaluation {
            mode: self.mode(mode_id)?,
            assets: self.calibrated_assets(mode_id)?,
            energy: self.energy(),
            cf: self.cf.clone(),
            freight: self.freight_factors(),
        })
    }

    pub fn physical_evaluation(&self, mode_id: &str) -> Result<Evaluation<T>> {
        Ok(Evaluation {
            mode: self.physical_mode(mode_id)?,
            assets: self.physical_assets()?,
            energy: self.energy(),
            cf: self.cf.clone(),
            freight: self.freight_factors(),
        })
    }

    /// Calibrated-path assessment of one mode.
    pub fn assess(&self, mode_id: &str) -> Result<AssessmentResult<T>> {
        self.evaluation(mode_id)?.assess()
    }

    /// Calibrated-path assessment of every mode, in definition order.
    pub fn assess_all(&self) -> Result<Vec<AssessmentResult<T>>> {
        self.mode_ids().into_iter().map(|id| self.assess(id)).collect()
    }

    /// Bundled scenario levels of one axis for a mode, in file order.
    pub fn levels(&self, mode_id: &str, axis: Axis) -> Result<Vec<ScenarioSpec<T>>> {
        let cfg = self.mode_config(mode_id)?;
        let levels: Vec<ScenarioSpec<T>> = match axis {
            Axis::Lifespan => self
                .lifespan_levels
                .iter()
                .filter(|l| l.mode == mode_id)
                .map(|l| ScenarioSpec::lifespan(l.scenario.clone(), l.lifetime_km))
                .collect(),
            Axis::Servicing => {
                if cfg.servicing.is_none() {
                    return Err(Error::InvalidScenario(format!(
                        "servicing axis needs a shared mode, `{mode_id}` is private"
                    )));
                }
                self.servicing_levels
                    .iter()
                    .filter(|l| l.mode == mode_id)
                    .map(|l| {
                        Ok(ScenarioSpec {
                            label: l.scenario.clone(),
                            level: ScenarioLevel::Servicing {
                                distance_m_per_vkt: l.distance_m_per_vkt,
                                service_vehicle: l
                                    .service_vehicle
                                    .as_deref()
                                    .map(|v| self.service_vehicle(v))
                                    .transpose()?,
                            },
                        })
                    })
                    .collect::<Result<_>>()?
            }
            Axis::Shipping => self
                .shipping_routes
                .iter()
                .map(|r| ScenarioSpec::shipping(r.route()))
                .collect(),
            Axis::Electricity => self
                .mixes
                .iter()
                .map(|m| ScenarioSpec::electricity(m.id.clone()))
                .collect(),
        };
        if levels.is_empty() {
            return Err(Error::InvalidScenario(format!("no {axis} levels for `{mode_id}`")));
        }
        Ok(levels)
    }

    pub fn shipping_route(&self, route_id: &str) -> Result<&ShippingRouteSpec<T>> {
        self.shipping_routes
            .iter()
            .find(|r| r.route_id == route_id)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown shipping route `{route_id}`")))
    }

    pub fn private_bike_lifetime(&self) -> Result<PrivateBikeLifetime<T>> {
        derive_private_bike_lifetime(&self.survey_age, &self.survey_usage)
    }

    pub fn station_energy(&self) -> Result<StationEnergy<T>> {
        let p = &self.parameters.station_energy;
        prorate_station_energy(
            T::lit(p.base_kwh),
            T::lit(p.base_docks),
            T::lit(p.total_docks),
            T::lit(p.stations),
        )
    }

    /// Data warnings that do not prevent an assessment.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in self.traffic.iter().filter(|t| t.vkt.is_none()) {
            out.push(format!(
                "{TRAFFIC}: `{}` has no traffic figure and is left out of the {} denominator",
                t.mode, t.infrastructure
            ));
        }
        if let Ok(p) = self.private_bike_lifetime() {
            out.extend(p.warnings);
        }
        out
    }
}
