//! Creates a federation with Module1, joins a federate bringing Module2, and
//! reads the MOM attributes and module reports.
//!
//! cargo run --example federation_mom

use std::path::Path;

use fomforge::federation::Scope;
use fomforge::io::ModuleDocument;
use fomforge::Rti;

fn doc(name: &str) -> ModuleDocument {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/aircraft")
        .join(name);
    ModuleDocument::parse(std::fs::read(path).expect("fixture")).expect("valid module")
}

fn main() -> Result<(), fomforge::federation::FederationError> {
    let rti = Rti::new();
    rti.create_federation_execution("Demo", vec![doc("module1.fmod")], None)?;
    let (handle, report) =
        rti.join_federation_execution("Logger", "Demo", vec![doc("module2.fmod")])?;
    println!("Logger joined with handle {handle}");
    if let Some(report) = report {
        println!("added classes: {}", report.added_classes.join(", "));
    }
    let tank = rti.subscribe("Demo", "Logger", "Tank")?;
    println!("subscribed Tank, handle {}", tank.get());

    for line in rti.mom_snapshot("Demo")?.to_lines() {
        println!("{line}");
    }
    let report = rti.request_module_data("Demo", &Scope::Federate("Logger".into()), 0)?;
    println!("Logger module 0: {} bytes", report.payload.len());
    let mim = rti.request_mim_data("Demo")?;
    println!("MIM: {} bytes", mim.payload.len());

    rti.resign_federate("Demo", "Logger")?;
    rti.destroy_federation_execution("Demo")?;
    println!("federations left: {}", rti.federation_names().len());
    Ok(())
}
