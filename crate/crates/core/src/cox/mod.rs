//! Vehicles on streets and Palm conditioning on the typical vehicle.

mod io;
mod palm;
mod params;
mod vehicles;

pub use io::{read_scenario, write_scenario, ScenarioDump, VEHICLE_HEADER};
pub use palm::{
    check_own_streets, condition_typical_line_model, condition_typical_plm, condition_typical_psp,
    nearest_neighbor_distance, own_stick, PalmView, PlmField, TypicalPoint, TypicalScenario, ViewVehicle,
    MAX_RESAMPLE,
};
pub use params::ModelParams;
pub use vehicles::{mark_aloha, sample_vehicles, sample_vehicles_in, thin_aloha, Vehicle, VehicleSet};
