//! Parsers and writers for every bundled file kind.

use std::collections::{BTreeMap, BTreeSet};

use super::csvio::{self, num, Row};
use crate::impact::{CharacterizationFactorSet, ImpactVector, Indicator, INDICATORS};
use crate::lci::{BackgroundDatabase, Exchange, Flow, FlowId, FlowKind, ProcessId, UnitProcess};
use crate::mode::Component;
use crate::scenario::{FreightMode, ShippingLeg, ShippingRoute};
use crate::{units, Error, Result, Scalar};

fn rows<'a>(
    text: &str,
    file: &'a str,
    kind: &str,
    header: &[&str],
    columns: &'a mut BTreeMap<String, usize>,
) -> Result<Vec<Row<'a>>> {
    csvio::read(text, file, kind, header, columns)
}

// ---------------------------------------------------------------- flows

const FLOW_HEADER: [&str; 5] = ["id", "kind", "name", "unit", "compartment"];

pub fn parse_flows(text: &str, file: &str) -> Result<Vec<Flow>> {
    let mut cols = BTreeMap::new();
    let mut out = Vec::new();
    for row in rows(text, file, "flows", &FLOW_HEADER, &mut cols)? {
        let kind = match row.required("kind")? {
            "product" => FlowKind::Product,
            "elementary" => FlowKind::Elementary,
            "waste" => FlowKind::Waste,
            other => return Err(row.err(format!("unknown flow kind `{other}`"))),
        };
        let unit = units::canonical_symbol(row.required("unit")?).map_err(|e| row.err(e.to_string()))?;
        out.push(Flow {
            id: row.required("id")?.into(),
            kind,
            name: row.required("name")?.to_string(),
            unit: unit.to_string(),
            compartment: row.optional("compartment")?.map(str::to_string),
        });
    }
    Ok(out)
}

pub fn write_flows<'a>(flows: impl IntoIterator<Item = &'a Flow>) -> String {
    let rows: Vec<Vec<String>> = flows
        .into_iter()
        .map(|f| {
            vec![
                f.id.to_string(),
                f.kind.as_str().to_string(),
                f.name.clone(),
                f.unit.clone(),
                f.compartment.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csvio::write("flows", &FLOW_HEADER, &rows)
}

// ---------------------------------------------------------------- processes

const PROCESS_HEADER: [&str; 6] = ["process_id", "name", "flow_id", "amount", "unit", "role"];

/// Parses unit processes, converting every amount into its flow's
/// canonical unit.
pub fn parse_processes<T: Scalar>(text: &str, file: &str, flows: &[Flow]) -> Result<Vec<UnitProcess<T>>> {
    let by_id: BTreeMap<&FlowId, &Flow> = flows.iter().map(|f| (&f.id, f)).collect();
    let mut cols = BTreeMap::new();
    let mut order: Vec<ProcessId> = Vec::new();
    let mut names: BTreeMap<ProcessId, String> = BTreeMap::new();
    let mut references: BTreeMap<ProcessId, Exchange<T>> = BTreeMap::new();
    let mut exchanges: BTreeMap<ProcessId, Vec<Exchange<T>>> = BTreeMap::new();
    for row in rows(text, file, "processes", &PROCESS_HEADER, &mut cols)? {
        let pid = ProcessId::from(row.required("process_id")?);
        let flow_id = FlowId::from(row.required("flow_id")?);
        let flow = by_id
            .get(&flow_id)
            .ok_or_else(|| Error::dangling(format!("{file}:{} process `{pid}`", row.line), "flow", flow_id.as_str()))?;
        let raw: T = row.number("amount")?;
        let amount = units::convert(raw, row.required("unit")?, &flow.unit).map_err(|e| row.err(e.to_string()))?;
        if !names.contains_key(&pid) {
            order.push(pid.clone());
            names.insert(pid.clone(), row.required("name")?.to_string());
        }
        let exchange = Exchange { flow: flow_id, amount };
        match row.required("role")? {
            "reference" => {
                if references.insert(pid.clone(), exchange).is_some() {
                    return Err(row.err(format!("process `{pid}` has two reference products")));
                }
            }
            "exchange" => exchanges.entry(pid).or_default().push(exchange),
            other => return Err(row.err(format!("unknown role `{other}`"))),
        }
    }
    order
        .into_iter()
        .map(|pid| {
            let reference = references
                .remove(&pid)
                .ok_or_else(|| Error::DatabaseIntegrity(format!("process `{pid}` has no reference product")))?;
            Ok(UnitProcess {
                name: names.remove(&pid).unwrap_or_default(),
                exchanges: exchanges.remove(&pid).unwrap_or_default(),
                reference,
                id: pid,
            })
        })
        .collect()
}

pub fn write_processes<T: Scalar>(db: &BackgroundDatabase<T>) -> String {
    let mut rows = Vec::new();
    for p in db.processes() {
        let unit = |f: &FlowId| db.flow(f).map(|x| x.unit.clone()).unwrap_or_default();
        rows.push(vec![
            p.id.to_string(),
            p.name.clone(),
            p.reference.flow.to_string(),
            num(p.reference.amount),
            unit(&p.reference.flow),
            "reference".into(),
        ]);
        for e in &p.exchanges {
            rows.push(vec![
                p.id.to_string(),
                p.name.clone(),
                e.flow.to_string(),
                num(e.amount),
                unit(&e.flow),
                "exchange".into(),
            ]);
        }
    }
    csvio::write("processes", &PROCESS_HEADER, &rows)
}

/// Flows and processes validated into a database.
pub fn parse_database<T: Scalar>(flows_text: &str, processes_text: &str) -> Result<BackgroundDatabase<T>> {
    let flows = parse_flows(flows_text, "flows.csv")?;
    let processes = parse_processes(processes_text, "processes.csv", &flows)?;
    BackgroundDatabase::new(flows, processes)
}

// ---------------------------------------------------------------- cfs

const CF_HEADER: [&str; 6] = ["flow_id", "compartment", "indicator", "factor", "unit", "provenance"];

/// Loads characterization factors, checking flows, compartments and units
/// against the database.
pub fn load_method<T: Scalar>(
    text: &str,
    file: &str,
    db: &BackgroundDatabase<T>,
) -> Result<CharacterizationFactorSet<T>> {
    let mut cols = BTreeMap::new();
    let mut set = CharacterizationFactorSet::new();
    for row in rows(text, file, "cfs", &CF_HEADER, &mut cols)? {
        let flow_id = FlowId::from(row.required("flow_id")?);
        let flow = db
            .flow(&flow_id)
            .ok_or_else(|| Error::dangling(format!("{file}:{}", row.line), "flow", flow_id.as_str()))?;
        let k: Indicator = row
            .required("indicator")?
            .parse()
            .map_err(|e: Error| row.err(e.to_string()))?;
        let compartment = row.optional("compartment")?;
        if compartment != flow.compartment.as_deref() {
            return Err(row.err(format!(
                "compartment `{}` does not match flow `{flow_id}`",
                compartment.unwrap_or("")
            )));
        }
        let expected = format!("{}/{}", k.unit(), flow.unit);
        let unit = row.required("unit")?;
        if unit != expected {
            return Err(row.err(format!("unit `{unit}` should be `{expected}`")));
        }
        set.insert(flow_id, k, row.number("factor")?, row.text("provenance")?)?;
    }
    Ok(set)
}

pub fn write_method<T: Scalar>(cf: &CharacterizationFactorSet<T>, db: &BackgroundDatabase<T>) -> String {
    let rows: Vec<Vec<String>> = cf
        .entries()
        .map(|(flow, k, e)| {
            let f = db.flow(flow);
            vec![
                flow.to_string(),
                f.and_then(|f| f.compartment.clone()).unwrap_or_default(),
                k.id().to_string(),
                num(e.value),
                format!("{}/{}", k.unit(), f.map(|f| f.unit.as_str()).unwrap_or("")),
                e.provenance.clone(),
            ]
        })
        .collect();
    csvio::write("cfs", &CF_HEADER, &rows)
}

// ---------------------------------------------------------------- traffic

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficRow<T> {
    pub mode: String,
    /// `None` where the traffic table leaves the cell blank.
    pub vkt: Option<T>,
    pub infrastructure: String,
    pub provenance: String,
}

const TRAFFIC_HEADER: [&str; 4] = ["mode", "vkt", "infrastructure", "provenance"];

pub fn parse_traffic<T: Scalar>(text: &str, file: &str) -> Result<Vec<TrafficRow<T>>> {
    let mut cols = BTreeMap::new();
    let mut out = Vec::new();
    for row in rows(text, file, "traffic", &TRAFFIC_HEADER, &mut cols)? {
        let vkt = row.optional_number("vkt")?;
        if vkt.is_some_and(|v: T| v < T::zero()) {
            return Err(row.err("negative traffic"));
        }
        out.push(TrafficRow {
            mode: row.required("mode")?.to_string(),
            vkt,
            infrastructure: row.required("infrastructure")?.to_string(),
            provenance: row.text("provenance")?.to_string(),
        });
    }
    Ok(out)
}

pub fn write_traffic<T: Scalar>(traffic: &[TrafficRow<T>]) -> String {
    let rows: Vec<Vec<String>> = traffic
        .iter()
        .map(|t| {
            vec![
                t.mode.clone(),
                t.vkt.map(num).unwrap_or_default(),
                t.infrastructure.clone(),
                t.provenance.clone(),
            ]
        })
        .collect();
    csvio::write("traffic", &TRAFFIC_HEADER, &rows)
}

/// Sum of populated traffic rows for an infrastructure type.
pub fn annual_vkt<T: Scalar>(traffic: &[TrafficRow<T>], infrastructure: &str) -> T {
    traffic
        .iter()
        .filter(|t| t.infrastructure == infrastructure)
        .filter_map(|t| t.vkt)
        .sum()
}

// ---------------------------------------------------------------- infrastructure

#[derive(Debug, Clone, PartialEq)]
pub struct InfrastructureLciRow<T> {
    pub flow: FlowId,
    /// In the flow's canonical unit, per functional unit.
    pub amount: T,
    pub provenance: String,
}

/// Annual per-unit LCI of an infrastructure asset, before
/// characterization.
#[derive(Debug, Clone, PartialEq)]
pub struct InfrastructureLci<T> {
    pub asset_id: String,
    pub kind: String,
    pub functional_unit: String,
    pub quantity: T,
    pub quantity_unit: String,
    pub traffic_class: String,
    pub rows: Vec<InfrastructureLciRow<T>>,
}

impl<T: Scalar> InfrastructureLci<T> {
    pub fn demand(&self) -> BTreeMap<FlowId, T> {
        let mut d = BTreeMap::new();
        for r in &self.rows {
            let slot = d.entry(r.flow.clone()).or_insert_with(T::zero);
            *slot = *slot + r.amount;
        }
        d
    }
}

const INFRA_HEADER: [&str; 10] = [
    "asset_id",
    "kind",
    "functional_unit",
    "quantity",
    "quantity_unit",
    "traffic_class",
    "flow_id",
    "amount",
    "unit",
    "provenance",
];

pub fn parse_infrastructure<T: Scalar>(
    text: &str,
    file: &str,
    db: &BackgroundDatabase<T>,
) -> Result<Vec<InfrastructureLci<T>>> {
    let mut cols = BTreeMap::new();
    let mut out: Vec<InfrastructureLci<T>> = Vec::new();
    for row in rows(text, file, "infrastructure", &INFRA_HEADER, &mut cols)? {
        let asset_id = row.required("asset_id")?;
        let flow_id = FlowId::from(row.required("flow_id")?);
        let flow = db
            .flow(&flow_id)
            .filter(|f| f.kind == FlowKind::Product)
            .ok_or_else(|| {
                Error::dangling(
                    format!("{file}:{} asset `{asset_id}`", row.line),
                    "material flow",
                    flow_id.as_str(),
                )
            })?;
        let raw: T = row.number("amount")?;
        let amount = units::convert(raw, row.required("unit")?, &flow.unit).map_err(|e| row.err(e.to_string()))?;
        let quantity: T = row.number("quantity")?;
        if !(quantity > T::zero()) {
            return Err(row.err("asset quantity must be positive"));
        }
        let lci_row = InfrastructureLciRow {
            flow: flow_id,
            amount,
            provenance: row.text("provenance")?.to_string(),
        };
        match out.iter_mut().find(|a| a.asset_id == asset_id) {
            Some(asset) => {
                if asset.quantity != quantity || asset.traffic_class != row.required("traffic_class")? {
                    return Err(row.err(format!("asset `{asset_id}` attributes differ between rows")));
                }
                asset.rows.push(lci_row);
            }
            None => out.push(InfrastructureLci {
                asset_id: asset_id.to_string(),
                kind: row.required("kind")?.to_string(),
                functional_unit: row.required("functional_unit")?.to_string(),
                quantity,
                quantity_unit: row.required("quantity_unit")?.to_string(),
                traffic_class: row.required("traffic_class")?.to_string(),
                rows: vec![lci_row],
            }),
        }
    }
    Ok(out)
}

pub fn write_infrastructure<T: Scalar>(assets: &[InfrastructureLci<T>], db: &BackgroundDatabase<T>) -> String {
    let mut rows = Vec::new();
    for a in assets {
        for r in &a.rows {
            rows.push(vec![
                a.asset_id.clone(),
                a.kind.clone(),
                a.functional_unit.clone(),
                num(a.quantity),
                a.quantity_unit.clone(),
                a.traffic_class.clone(),
                r.flow.to_string(),
                num(r.amount),
                db.flow(&r.flow).map(|f| f.unit.clone()).unwrap_or_default(),
                r.provenance.clone(),
            ]);
        }
    }
    csvio::write("infrastructure", &INFRA_HEADER, &rows)
}

// ---------------------------------------------------------------- impact tables

/// A named per-unit impact vector: electricity mix (per kWh), freight
/// mode (per tkm) or fuel (per kg).
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactFactor<T> {
    pub id: String,
    pub label: Option<String>,
    pub impact: ImpactVector<T>,
    pub provenance: String,
}

fn impact_header(key: &'static str, with_label: bool) -> Vec<&'static str> {
    let mut h = vec![key];
    if with_label {
        h.push("label");
    }
    h.extend(INDICATORS.iter().map(|k| k.id()));
    h.push("provenance");
    h
}

fn parse_impact_table<T: Scalar>(
    text: &str,
    file: &str,
    kind: &str,
    key: &'static str,
    with_label: bool,
) -> Result<Vec<ImpactFactor<T>>> {
    let header = impact_header(key, with_label);
    let mut cols = BTreeMap::new();
    let mut out: Vec<ImpactFactor<T>> = Vec::new();
    for row in rows(text, file, kind, &header, &mut cols)? {
        let mut impact = ImpactVector::zero();
        for k in INDICATORS {
            let v: T = row.number(k.id())?;
            if v < T::zero() {
                return Err(row.err(format!("{k} factor must be nonnegative")));
            }
            impact[k] = v;
        }
        let id = row.required(key)?.to_string();
        if out.iter().any(|f| f.id == id) {
            return Err(row.err(format!("duplicate `{id}`")));
        }
        out.push(ImpactFactor {
            id,
            label: if with_label {
                Some(row.required("label")?.to_string())
            } else {
                None
            },
            impact,
            provenance: row.text("provenance")?.to_string(),
        });
    }
    Ok(out)
}

fn write_impact_table<T: Scalar>(
    factors: &[ImpactFactor<T>],
    kind: &str,
    key: &'static str,
    with_label: bool,
) -> String {
    let header = impact_header(key, with_label);
    let rows: Vec<Vec<String>> = factors
        .iter()
        .map(|f| {
            let mut r = vec![f.id.clone()];
            if with_label {
                r.push(f.label.clone().unwrap_or_default());
            }
            r.extend(f.impact.0.iter().map(|v| num(*v)));
            r.push(f.provenance.clone());
            r
        })
        .collect();
    csvio::write(kind, &header, &rows)
}

pub fn parse_mixes<T: Scalar>(text: &str, file: &str) -> Result<Vec<ImpactFactor<T>>> {
    parse_impact_table(text, file, "mixes", "mix_id", true)
}

pub fn write_mixes<T: Scalar>(mixes: &[ImpactFactor<T>]) -> String {
    write_impact_table(mixes, "mixes", "mix_id", true)
}

pub fn parse_fuels<T: Scalar>(text: &str, file: &str) -> Result<Vec<ImpactFactor<T>>> {
    parse_impact_table(text, file, "fuels", "fuel_id", false)
}

pub fn write_fuels<T: Scalar>(fuels: &[ImpactFactor<T>]) -> String {
    write_impact_table(fuels, "fuels", "fuel_id", false)
}

pub fn parse_freight<T: Scalar>(text: &str, file: &str) -> Result<Vec<ImpactFactor<T>>> {
    let table = parse_impact_table(text, file, "freight", "mode", false)?;
    for f in &table {
        f.id.parse::<FreightMode>()?;
    }
    Ok(table)
}

pub fn write_freight<T: Scalar>(freight: &[ImpactFactor<T>]) -> String {
    write_impact_table(freight, "freight", "mode", false)
}

// ---------------------------------------------------------------- hbefa

#[derive(Debug, Clone, PartialEq)]
pub struct HbefaRow<T> {
    pub pollutant: String,
    pub flow: FlowId,
    pub category: String,
    pub g_per_vkt: T,
}

const HBEFA_HEADER: [&str; 4] = ["pollutant", "flow_id", "category", "g_per_vkt"];

pub fn parse_hbefa<T: Scalar>(text: &str, file: &str) -> Result<Vec<HbefaRow<T>>> {
    let mut cols = BTreeMap::new();
    rows(text, file, "hbefa", &HBEFA_HEADER, &mut cols)?
        .into_iter()
        .map(|row| {
            Ok(HbefaRow {
                pollutant: row.required("pollutant")?.to_string(),
                flow: row.required("flow_id")?.into(),
                category: row.required("category")?.to_string(),
                g_per_vkt: row.number("g_per_vkt")?,
            })
        })
        .collect()
}

pub fn write_hbefa<T: Scalar>(table: &[HbefaRow<T>]) -> String {
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            vec![
                r.pollutant.clone(),
                r.flow.to_string(),
                r.category.clone(),
                num(r.g_per_vkt),
            ]
        })
        .collect();
    csvio::write("hbefa", &HBEFA_HEADER, &rows)
}

/// Tailpipe emissions in g/vkt summed over emission categories, skipping
/// the fuel-consumption row.
pub fn tailpipe_map<T: Scalar>(table: &[HbefaRow<T>], fuel_flow: &str) -> BTreeMap<FlowId, T> {
    let mut out = BTreeMap::new();
    for r in table.iter().filter(|r| r.flow.as_str() != fuel_flow) {
        let slot = out.entry(r.flow.clone()).or_insert_with(T::zero);
        *slot = *slot + r.g_per_vkt;
    }
    out
}

// ---------------------------------------------------------------- surveys

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow<T> {
    pub label: String,
    pub percent: T,
    pub quantity: T,
}

/// Survey answers with the share of respondents and one per-answer
/// quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyTable<T> {
    pub quantity_name: String,
    pub rows: Vec<SurveyRow<T>>,
}

impl<T: Scalar> SurveyTable<T> {
    pub fn percent_total(&self) -> T {
        self.rows.iter().map(|r| r.percent).sum()
    }

    /// `Σ pᵢ·xᵢ` with percentages as fractions.
    pub fn weighted_mean(&self) -> T {
        let hundred = T::lit(100.0);
        self.rows.iter().map(|r| r.percent / hundred * r.quantity).sum()
    }
}

pub fn parse_survey<T: Scalar>(text: &str, file: &str, quantity_column: &str) -> Result<SurveyTable<T>> {
    let mut cols = BTreeMap::new();
    let mut labels = BTreeSet::new();
    let mut out = Vec::new();
    for row in rows(text, file, "survey", &["answer", "percent", quantity_column], &mut cols)? {
        let label = row.required("answer")?.to_string();
        if !labels.insert(label.clone()) {
            return Err(row.err(format!("duplicate answer `{label}`")));
        }
        let percent: T = row.number("percent")?;
        if percent < T::zero() || percent > T::lit(100.0) {
            return Err(row.err("percent outside [0, 100]"));
        }
        out.push(SurveyRow {
            label,
            percent,
            quantity: row.number(quantity_column)?,
        });
    }
    Ok(SurveyTable {
        quantity_name: quantity_column.to_string(),
        rows: out,
    })
}

pub fn write_survey<T: Scalar>(table: &SurveyTable<T>) -> String {
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| vec![r.label.clone(), num(r.percent), num(r.quantity)])
        .collect();
    csvio::write("survey", &["answer", "percent", &table.quantity_name], &rows)
}

// ---------------------------------------------------------------- calibrated components

#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedShare<T> {
    pub component: Component,
    pub share: T,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedEntry<T> {
    pub total: T,
    pub shares: Vec<CalibratedShare<T>>,
}

impl<T: Scalar> CalibratedEntry<T> {
    pub fn share(&self, component: &Component) -> Option<T> {
        self.shares.iter().find(|s| &s.component == component).map(|s| s.share)
    }

    pub fn share_sum(&self) -> T {
        self.shares.iter().map(|s| s.share).sum()
    }

    /// Per-pkt impact of one component.
    pub fn component_impact(&self, component: &Component) -> Option<T> {
        self.share(component).map(|s| s * self.total)
    }
}

/// Per mode and indicator: reported total and component shares.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalibratedComponentTable<T> {
    pub modes: Vec<String>,
    pub entries: BTreeMap<(String, Indicator), CalibratedEntry<T>>,
}

impl<T: Scalar> CalibratedComponentTable<T> {
    pub fn entry(&self, mode: &str, k: Indicator) -> Option<&CalibratedEntry<T>> {
        self.entries.get(&(mode.to_string(), k))
    }

    pub fn totals(&self, mode: &str) -> Option<ImpactVector<T>> {
        let mut v = ImpactVector::zero();
        for k in INDICATORS {
            v[k] = self.entry(mode, k)?.total;
        }
        Some(v)
    }

    /// Component impact per pkt on all indicators; zero where the component
    /// is absent.
    pub fn component(&self, mode: &str, component: &Component) -> ImpactVector<T> {
        ImpactVector::from_fn(|k| {
            self.entry(mode, k)
                .and_then(|e| e.component_impact(component))
                .unwrap_or_else(T::zero)
        })
    }

    pub fn components(&self, mode: &str) -> Vec<Component> {
        let mut out: Vec<Component> = Vec::new();
        for k in INDICATORS {
            for s in self.entry(mode, k).map(|e| e.shares.as_slice()).unwrap_or(&[]) {
                if !out.contains(&s.component) {
                    out.push(s.component.clone());
                }
            }
        }
        out
    }
}

const CALIBRATED_HEADER: [&str; 6] = ["mode", "indicator", "total", "component", "share", "provenance"];

pub fn parse_calibrated<T: Scalar>(text: &str, file: &str) -> Result<CalibratedComponentTable<T>> {
    let mut cols = BTreeMap::new();
    let mut table = CalibratedComponentTable::default();
    let mut first_line: BTreeMap<(String, Indicator), u64> = BTreeMap::new();
    for row in rows(text, file, "calibrated-components", &CALIBRATED_HEADER, &mut cols)? {
        let mode = row.required("mode")?.to_string();
        let k: Indicator = row
            .required("indicator")?
            .parse()
            .map_err(|e: Error| row.err(e.to_string()))?;
        let total: T = row.number("total")?;
        let component: Component = row
            .required("component")?
            .parse()
            .map_err(|e: Error| row.err(e.to_string()))?;
        if !table.modes.contains(&mode) {
            table.modes.push(mode.clone());
        }
        first_line.entry((mode.clone(), k)).or_insert(row.line);
        let entry = table.entries.entry((mode.clone(), k)).or_insert(CalibratedEntry {
            total,
            shares: Vec::new(),
        });
        if entry.total != total {
            return Err(row.err(format!("total for {mode}/{k} differs from earlier rows")));
        }
        if entry.shares.iter().any(|s| s.component == component) {
            return Err(row.err(format!("duplicate component `{component}` for {mode}/{k}")));
        }
        entry.shares.push(CalibratedShare {
            component,
            share: row.number("share")?,
            provenance: row.text("provenance")?.to_string(),
        });
    }
    let tolerance = T::lit(0.02);
    for (key, entry) in &table.entries {
        if (entry.share_sum() - T::one()).abs() > tolerance {
            return Err(Error::parse(
                file,
                first_line[key],
                format!("shares for {}/{} sum to {}", key.0, key.1, entry.share_sum()),
            ));
        }
    }
    Ok(table)
}

pub fn write_calibrated<T: Scalar>(table: &CalibratedComponentTable<T>) -> String {
    let mut rows = Vec::new();
    for mode in &table.modes {
        for k in INDICATORS {
            if let Some(e) = table.entry(mode, k) {
                for s in &e.shares {
                    rows.push(vec![
                        mode.clone(),
                        k.id().to_string(),
                        num(e.total),
                        s.component.to_string(),
                        num(s.share),
                        s.provenance.clone(),
                    ]);
                }
            }
        }
    }
    csvio::write("calibrated-components", &CALIBRATED_HEADER, &rows)
}

// ---------------------------------------------------------------- scenarios

#[derive(Debug, Clone, PartialEq)]
pub struct LifespanLevel<T> {
    pub mode: String,
    pub scenario: String,
    pub lifetime_km: T,
}

const LIFESPAN_HEADER: [&str; 3] = ["mode", "scenario", "lifetime_km"];

pub fn parse_lifespan_levels<T: Scalar>(text: &str, file: &str) -> Result<Vec<LifespanLevel<T>>> {
    let mut cols = BTreeMap::new();
    rows(text, file, "scenarios-lifespan", &LIFESPAN_HEADER, &mut cols)?
        .into_iter()
        .map(|row| {
            let km: T = row.number("lifetime_km")?;
            if !(km > T::zero()) {
                return Err(row.err("lifetime must be positive"));
            }
            Ok(LifespanLevel {
                mode: row.required("mode")?.to_string(),
                scenario: row.required("scenario")?.to_string(),
                lifetime_km: km,
            })
        })
        .collect()
}

pub fn write_lifespan_levels<T: Scalar>(levels: &[LifespanLevel<T>]) -> String {
    let rows: Vec<Vec<String>> = levels
        .iter()
        .map(|l| vec![l.mode.clone(), l.scenario.clone(), num(l.lifetime_km)])
        .collect();
    csvio::write("scenarios-lifespan", &LIFESPAN_HEADER, &rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServicingLevel<T> {
    pub mode: String,
    pub scenario: String,
    pub distance_m_per_vkt: T,
    /// Replaces the mode's service vehicle when set.
    pub service_vehicle: Option<String>,
}

const SERVICING_HEADER: [&str; 4] = ["mode", "scenario", "distance_m_per_vkt", "service_vehicle"];

pub fn parse_servicing_levels<T: Scalar>(text: &str, file: &str) -> Result<Vec<ServicingLevel<T>>> {
    let mut cols = BTreeMap::new();
    rows(text, file, "scenarios-servicing", &SERVICING_HEADER, &mut cols)?
        .into_iter()
        .map(|row| {
            let d: T = row.number("distance_m_per_vkt")?;
            if d < T::zero() {
                return Err(row.err("servicing distance must be nonnegative"));
            }
            Ok(ServicingLevel {
                mode: row.required("mode")?.to_string(),
                scenario: row.required("scenario")?.to_string(),
                distance_m_per_vkt: d,
                service_vehicle: row.optional("service_vehicle")?.map(str::to_string),
            })
        })
        .collect()
}

pub fn write_servicing_levels<T: Scalar>(levels: &[ServicingLevel<T>]) -> String {
    let rows: Vec<Vec<String>> = levels
        .iter()
        .map(|l| {
            vec![
                l.mode.clone(),
                l.scenario.clone(),
                num(l.distance_m_per_vkt),
                l.service_vehicle.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csvio::write("scenarios-servicing", &SERVICING_HEADER, &rows)
}

/// One printed route segment; a mixed-traction segment appears once per
/// traction with its fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ShippingSegment<T> {
    pub segment: u32,
    pub freight_mode: FreightMode,
    pub segment_km: T,
    pub fraction: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShippingRouteSpec<T> {
    pub route_id: String,
    pub market: String,
    pub label: String,
    pub segments: Vec<ShippingSegment<T>>,
}

impl<T: Scalar> ShippingRouteSpec<T> {
    pub fn route(&self) -> ShippingRoute<T> {
        ShippingRoute {
            route_id: self.route_id.clone(),
            market: self.market.clone(),
            label: self.label.clone(),
            legs: self
                .segments
                .iter()
                .map(|s| ShippingLeg {
                    freight_mode: s.freight_mode,
                    distance_km: s.segment_km * s.fraction,
                })
                .collect(),
        }
    }

    /// Printed segment lengths, each counted once.
    pub fn segment_lengths(&self) -> Vec<T> {
        let mut seen = BTreeSet::new();
        self.segments
            .iter()
            .filter(|s| seen.insert(s.segment))
            .map(|s| s.segment_km)
            .collect()
    }
}

const SHIPPING_HEADER: [&str; 7] = [
    "route_id",
    "market",
    "label",
    "segment",
    "freight_mode",
    "segment_km",
    "fraction",
];

pub fn parse_shipping_routes<T: Scalar>(text: &str, file: &str) -> Result<Vec<ShippingRouteSpec<T>>> {
    let mut cols = BTreeMap::new();
    let mut out: Vec<ShippingRouteSpec<T>> = Vec::new();
    for row in rows(text, file, "scenarios-shipping", &SHIPPING_HEADER, &mut cols)? {
        let route_id = row.required("route_id")?;
        let segment_km: T = row.number("segment_km")?;
        let fraction: T = row.number("fraction")?;
        if !(segment_km > T::zero()) || !(fraction > T::zero()) || fraction > T::one() {
            return Err(row.err("segment length must be positive and fraction in (0, 1]"));
        }
        let segment = ShippingSegment {
            segment: row
                .required("segment")?
                .parse()
                .map_err(|_| row.err("segment must be a positive integer"))?,
            freight_mode: row
                .required("freight_mode")?
                .parse()
                .map_err(|e: Error| row.err(e.to_string()))?,
            segment_km,
            fraction,
        };
        match out.iter_mut().find(|r| r.route_id == route_id) {
            Some(r) => r.segments.push(segment),
            None => out.push(ShippingRouteSpec {
                route_id: route_id.to_string(),
                market: row.required("market")?.to_string(),
                label: row.required("label")?.to_string(),
                segments: vec![segment],
            }),
        }
    }
    Ok(out)
}

pub fn write_shipping_routes<T: Scalar>(routes: &[ShippingRouteSpec<T>]) -> String {
    let mut rows = Vec::new();
    for r in routes {
        for s in &r.segments {
            rows.push(vec![
                r.route_id.clone(),
                r.market.clone(),
                r.label.clone(),
                s.segment.to_string(),
                s.freight_mode.id().to_string(),
                num(s.segment_km),
                num(s.fraction),
            ]);
        }
    }
    csvio::write("scenarios-shipping", &SHIPPING_HEADER, &rows)
}

// ---------------------------------------------------------------- references

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMode<T> {
    pub set: String,
    pub mode: String,
    pub gwp_g_per_pkt: T,
    /// `eq`, `lt` (upper bound) or `approx`.
    pub bound: String,
    pub provenance: String,
}

/// Read-only comparison modes, grouped by set name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReferenceModeSet<T> {
    pub entries: Vec<ReferenceMode<T>>,
}

impl<T: Scalar> ReferenceModeSet<T> {
    pub fn set(&self, name: &str) -> ReferenceModeSet<T> {
        ReferenceModeSet {
            entries: self.entries.iter().filter(|e| e.set == name).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

const REFERENCE_HEADER: [&str; 5] = ["set", "mode", "gwp_g_per_pkt", "bound", "provenance"];

pub fn parse_references<T: Scalar>(text: &str, file: &str) -> Result<ReferenceModeSet<T>> {
    let mut cols = BTreeMap::new();
    let entries = rows(text, file, "references", &REFERENCE_HEADER, &mut cols)?
        .into_iter()
        .map(|row| {
            let bound = row.required("bound")?;
            if !matches!(bound, "eq" | "lt" | "approx") {
                return Err(row.err(format!("unknown bound `{bound}`")));
            }
            Ok(ReferenceMode {
                set: row.required("set")?.to_string(),
                mode: row.required("mode")?.to_string(),
                gwp_g_per_pkt: row.number("gwp_g_per_pkt")?,
                bound: bound.to_string(),
                provenance: row.required("provenance")?.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ReferenceModeSet { entries })
}

pub fn write_references<T: Scalar>(refs: &ReferenceModeSet<T>) -> String {
    let rows: Vec<Vec<String>> = refs
        .entries
        .iter()
        .map(|r| {
            vec![
                r.set.clone(),
                r.mode.clone(),
                num(r.gwp_g_per_pkt),
                r.bound.clone(),
                r.provenance.clone(),
            ]
        })
        .collect();
    csvio::write("references", &REFERENCE_HEADER, &rows)
}
