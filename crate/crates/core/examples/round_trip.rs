//! Builds a module in code, writes it, reads it back and checks that the two
//! models are equal.
//!
//! cargo run --example round_trip

use fomforge::model::{
    AttributeDef, ClassDef, DataTypeCategory, DataTypeDef, ObjectClassSpec, Reference, Sharing,
};
use fomforge::{parse_module, serialize_module, ObjectModule};

fn main() {
    let mut module = ObjectModule::fom_module("Weather");
    module.identification.references = vec![Reference::standalone()];
    module
        .data_types
        .insert(DataTypeDef::new(
            "Celsius",
            DataTypeCategory::Simple,
            "HLAfloat32BE",
        ))
        .expect("new entry");
    let mut temp = AttributeDef::new("Temperature", "Celsius");
    temp.semantics = "Air temperature & dew point <approx>".into();
    let station: ClassDef<ObjectClassSpec> =
        ClassDef::object("Station", Sharing::PublishSubscribe, vec![temp]);
    module.object_classes.push(station);

    let text = serialize_module(&module);
    print!("{text}");
    let back = parse_module(text.as_bytes()).expect("parses").module;
    assert_eq!(back, module);
    assert_eq!(serialize_module(&back), text);
    eprintln!("round trip ok");
}
