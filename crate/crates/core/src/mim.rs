//! The built-in MOM and Initialization Module.

use std::num::NonZeroU64;

use crate::model::*;

/// Designator of the built-in MIM.
pub const DEFAULT_MIM_NAME: &str = "HLAstandardMIM";

pub const HLA_UNICODE_STRING: &str = "HLAunicodeString";
pub const HLA_INTEGER32BE: &str = "HLAinteger32BE";
pub const HLA_MODULE_DESIGNATOR_LIST: &str = "HLAmoduleDesignatorList";
pub const HLA_RELIABLE: &str = "HLAreliable";
pub const HLA_BEST_EFFORT: &str = "HLAbestEffort";

fn attr(name: &str, data_type: &str) -> AttributeDef {
    AttributeDef::new(name, data_type)
}

fn param(name: &str, data_type: &str) -> ParameterDef {
    ParameterDef::new(name, data_type)
}

fn interaction(name: &str, sharing: Sharing, parameters: Vec<ParameterDef>) -> InteractionClassDef {
    ClassDef::regular(
        name,
        InteractionClassSpec {
            sharing,
            transportation: HLA_RELIABLE.into(),
            order: Order::Receive,
            parameters,
        },
    )
}

/// Returns the standard MIM: both roots, the MOM classes used for module
/// introspection, the baseline data types and the two transportations.
pub fn default_mim() -> ObjectModule {
    let mut mim = ObjectModule::new(ModelIdentification::new(
        DEFAULT_MIM_NAME,
        ModelType::Mim,
        "1.0",
    ));
    mim.identification.references.push(Reference::standalone());

    mim.object_root = Some(ObjectClassSpec {
        sharing: Sharing::Neither,
        attributes: vec![attr("HLAprivilegeToDeleteObject", "HLAtoken")],
    });
    mim.object_classes = vec![ObjectClassDef::object(MOM_PREFIX, Sharing::Neither, vec![])
        .with_children(vec![
            ObjectClassDef::object(
                "HLAfederate",
                Sharing::Publish,
                vec![
                    attr("HLAfederateName", HLA_UNICODE_STRING),
                    attr("HLAFOMmoduleDesignatorList", HLA_MODULE_DESIGNATOR_LIST),
                ],
            ),
            ObjectClassDef::object(
                "HLAfederation",
                Sharing::Publish,
                vec![
                    attr("HLAfederationName", HLA_UNICODE_STRING),
                    attr("HLAFOMmoduleDesignatorList", HLA_MODULE_DESIGNATOR_LIST),
                    attr("HLAMIMDesignator", HLA_UNICODE_STRING),
                    attr("HLAcurrentFDD", HLA_UNICODE_STRING),
                ],
            ),
        ])];

    mim.interaction_root = Some(InteractionClassSpec {
        sharing: Sharing::Neither,
        transportation: HLA_RELIABLE.into(),
        order: Order::Receive,
        parameters: vec![],
    });
    let indicator = || param("HLAFOMmoduleIndicator", HLA_INTEGER32BE);
    let federate = || param("HLAfederate", HLA_UNICODE_STRING);
    mim.interaction_classes = vec![interaction(MOM_PREFIX, Sharing::Neither, vec![])
        .with_children(vec![
            interaction("HLAfederate", Sharing::Neither, vec![federate()]).with_children(vec![
                interaction("HLArequest", Sharing::Neither, vec![]).with_children(vec![
                    interaction(
                        "HLArequestFOMmoduleData",
                        Sharing::Subscribe,
                        vec![indicator()],
                    ),
                ]),
                interaction("HLAreport", Sharing::Neither, vec![]).with_children(vec![
                    interaction(
                        "HLAreportFOMmoduleData",
                        Sharing::Publish,
                        vec![indicator(), param("HLAFOMmoduleData", HLA_UNICODE_STRING)],
                    ),
                ]),
            ]),
            interaction("HLAfederation", Sharing::Neither, vec![]).with_children(vec![
                interaction("HLArequest", Sharing::Neither, vec![]).with_children(vec![
                    interaction(
                        "HLArequestFOMmoduleData",
                        Sharing::Subscribe,
                        vec![indicator()],
                    ),
                    interaction("HLArequestMIMData", Sharing::Subscribe, vec![]),
                ]),
                interaction("HLAreport", Sharing::Neither, vec![]).with_children(vec![
                    interaction(
                        "HLAreportFOMmoduleData",
                        Sharing::Publish,
                        vec![indicator(), param("HLAFOMmoduleData", HLA_UNICODE_STRING)],
                    ),
                    interaction(
                        "HLAreportMIMData",
                        Sharing::Publish,
                        vec![param("HLAMIMData", HLA_UNICODE_STRING)],
                    ),
                ]),
            ]),
        ])];

    use DataTypeCategory::*;
    mim.data_types = [
        DataTypeDef::new("HLAoctet", Basic, "8 Big"),
        DataTypeDef::new("HLAinteger32BE", Basic, "32 Big"),
        DataTypeDef::new("HLAinteger64BE", Basic, "64 Big"),
        DataTypeDef::new("HLAfloat64BE", Basic, "64 Big"),
        DataTypeDef::new("HLAunicodeString", Array, "HLAunicodeChar Dynamic"),
        DataTypeDef::new("HLAunicodeChar", Basic, "16 Big"),
        DataTypeDef::new(
            "HLAboolean",
            Enumerated,
            "HLAinteger32BE HLAfalse=0 HLAtrue=1",
        ),
        DataTypeDef::new("HLAtoken", Array, "HLAoctet 0"),
        DataTypeDef::new(
            HLA_MODULE_DESIGNATOR_LIST,
            Array,
            "HLAunicodeString Dynamic",
        ),
    ]
    .into_iter()
    .collect();
    mim.dimensions = [Dimension {
        name: "HLAfederateDimension".into(),
        upper_bound: NonZeroU64::new(u32::MAX as u64).expect("nonzero"),
    }]
    .into_iter()
    .collect();
    mim.transportations = [
        Transportation {
            name: HLA_RELIABLE.into(),
            reliability: Reliability::Reliable,
        },
        Transportation {
            name: HLA_BEST_EFFORT.into(),
            reliability: Reliability::BestEffort,
        },
    ]
    .into_iter()
    .collect();
    mim.switches = Some(Switches::all(SwitchValue::Enabled));
    mim
}
