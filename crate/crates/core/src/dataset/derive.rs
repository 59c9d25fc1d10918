//! Derived inputs: lifetimes, station energy, servicing distances and the
//! tailpipe correction.

use std::collections::BTreeMap;

use super::files::SurveyTable;
use crate::lci::FlowId;
use crate::{Error, Result, Scalar};

fn positive<T: Scalar>(name: &str, v: T) -> Result<T> {
    if v > T::zero() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharedBikeLifetime<T> {
    pub lifespan_months: T,
    pub lifetime_km: T,
    /// Lifetime from the lifespan rounded to one decimal.
    pub lifetime_km_rounded: T,
}

/// Lifespan = contract length × operated / manufactured bikes; mileage =
/// lifespan in years × annual km.
pub fn shared_bike_lifetime<T: Scalar>(
    contract_months: T,
    manufactured: T,
    operated: T,
    annual_km: T,
) -> Result<SharedBikeLifetime<T>> {
    let manufactured = positive("bikes manufactured", manufactured)?;
    let months = contract_months * operated / manufactured;
    let twelve = T::lit(12.0);
    let rounded = (months * T::lit(10.0)).round() / T::lit(10.0);
    Ok(SharedBikeLifetime {
        lifespan_months: months,
        lifetime_km: months * annual_km / twelve,
        lifetime_km_rounded: rounded * annual_km / twelve,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivateBikeLifetime<T> {
    pub mean_age_years: T,
    pub lifespan_years: T,
    pub annual_km: T,
    pub lifetime_km: T,
    /// Same product with the mean age rounded to 0.1 year and the annual
    /// distance to the kilometre.
    pub lifetime_km_rounded: T,
    pub warnings: Vec<String>,
}

/// Lifespan = 2 × mean age of the surveyed bikes; lifetime mileage =
/// lifespan × mean annual distance.
pub fn derive_private_bike_lifetime<T: Scalar>(
    age: &SurveyTable<T>,
    usage: &SurveyTable<T>,
) -> Result<PrivateBikeLifetime<T>> {
    if age.rows.is_empty() || usage.rows.is_empty() {
        return Err(Error::Domain("survey tables must not be empty".into()));
    }
    let mut warnings = Vec::new();
    for (name, t) in [("age", age), ("usage", usage)] {
        let total = t.percent_total();
        if (total - T::lit(100.0)).abs() > T::lit(5.0) {
            warnings.push(format!("{name} survey percentages sum to {total}, not 100"));
        }
    }
    let mean_age = age.weighted_mean();
    let annual_km = usage.weighted_mean();
    let two = T::lit(2.0);
    let age_rounded = (mean_age * T::lit(10.0)).round() / T::lit(10.0);
    Ok(PrivateBikeLifetime {
        mean_age_years: mean_age,
        lifespan_years: two * mean_age,
        annual_km,
        lifetime_km: two * mean_age * annual_km,
        lifetime_km_rounded: two * age_rounded * annual_km.round(),
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationEnergy<T> {
    pub per_station_kwh: T,
    pub network_kwh: T,
}

/// Per-station annual consumption scaled from a reference station by its
/// dock count.
pub fn prorate_station_energy<T: Scalar>(
    base_kwh: T,
    base_docks: T,
    total_docks: T,
    stations: T,
) -> Result<StationEnergy<T>> {
    let stations = positive("station count", stations)?;
    let base_docks = positive("base dock count", base_docks)?;
    if base_kwh < T::zero() || total_docks < T::zero() {
        return Err(Error::Domain("station energy inputs must be nonnegative".into()));
    }
    let per_station = base_kwh * (total_docks / stations) / base_docks;
    Ok(StationEnergy {
        per_station_kwh: per_station,
        network_kwh: per_station * stations,
    })
}

/// Fleet-management distance in metres per serviced vehicle-kilometre.
pub fn derive_servicing_distance<T: Scalar>(
    vans: T,
    km_per_day_per_van: T,
    vehicles: T,
    km_per_year_per_vehicle: T,
) -> Result<T> {
    let denominator = positive("serviced kilometres", vehicles * km_per_year_per_vehicle)?;
    if vans < T::zero() || km_per_day_per_van < T::zero() {
        return Err(Error::Domain("service fleet inputs must be nonnegative".into()));
    }
    Ok(vans * km_per_day_per_van * T::lit(365.0) / denominator * T::lit(1000.0))
}

/// Collection distance in metres per vkt when one trip of `trip_km` picks up
/// `vehicles_per_trip`, each having run `km_between_pickups`.
pub fn es_pickup_distance<T: Scalar>(trip_km: T, vehicles_per_trip: T, km_between_pickups: T) -> Result<T> {
    let d = positive("kilometres per trip batch", vehicles_per_trip * km_between_pickups)?;
    Ok(trip_km / d * T::lit(1000.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailpipeCorrection<T> {
    pub ratio: T,
    pub emissions: BTreeMap<FlowId, T>,
}

/// Scales a baseline emission row by the share-weighted urban consumption
/// over the baseline consumption.
pub fn correct_tailpipe<T: Scalar>(
    row: &BTreeMap<FlowId, T>,
    baseline_l_per_100km: T,
    consumptions_l_per_100km: &[T],
    shares: &[T],
) -> Result<TailpipeCorrection<T>> {
    let baseline = positive("baseline consumption", baseline_l_per_100km)?;
    if consumptions_l_per_100km.len() != shares.len() || shares.is_empty() {
        return Err(Error::Domain("one share per consumption is required".into()));
    }
    let weighted: T = consumptions_l_per_100km.iter().zip(shares).map(|(c, s)| *c * *s).sum();
    let ratio = weighted / baseline;
    Ok(TailpipeCorrection {
        ratio,
        emissions: row.iter().map(|(f, v)| (f.clone(), *v * ratio)).collect(),
    })
}

/// `1 / (vehicles × km)`.
pub fn station_allocation<T: Scalar>(vehicles: T, annual_km: T) -> Result<T> {
    Ok(T::one() / positive("station traffic", vehicles * annual_km)?)
}
