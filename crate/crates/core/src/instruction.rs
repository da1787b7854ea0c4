use std::f64::consts::PI;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::CoreError;

/// Parameters of a general 1-qubit unitary in ZYZ form with a global phase:
/// `U = e^{i phase} Rz(zeta) Ry(theta) Rz(xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUParams {
    pub phase: f64,
    pub zeta: f64,
    pub theta: f64,
    pub xi: f64,
}

impl LocalUParams {
    pub fn identity() -> Self {
        LocalUParams {
            phase: 0.0,
            zeta: 0.0,
            theta: 0.0,
            xi: 0.0,
        }
    }
}

/// The instruction taxonomy: local gates, the two-qubit primitives and the
/// multi-qubit complex instructions handled by the assembler.
///
/// Multi-qubit "block" kinds act on contiguous windows of a qubit line.
/// `SwapBlock(m)` is the indirect 1<->m swap (ends exchanged, middles fixed),
/// `CpSwapBlock(j, m)` the combined controlled-phase + block-swap module of
/// the recursive QFT with phase-family index `j`, and `CmNotK` the
/// multi-target controlled NOT used by the backbone scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum InstructionKind {
    LocalU(LocalUParams),
    Cnot,
    ControlledPhase { angle: f64 },
    Swap2,
    SwapBlock { m: u32 },
    QftBlock { m: u32 },
    CpSwapBlock { j: u32, m: u32 },
    CmNot { controls: u32 },
    CmNotK { controls: u32, spacers: u32 },
    OpaqueBlock { label: String, m: u32 },
}

impl InstructionKind {
    /// Number of qubits the instruction occupies.
    pub fn width(&self) -> u32 {
        match self {
            InstructionKind::LocalU(_) => 1,
            InstructionKind::Cnot
            | InstructionKind::ControlledPhase { .. }
            | InstructionKind::Swap2 => 2,
            InstructionKind::SwapBlock { m }
            | InstructionKind::QftBlock { m }
            | InstructionKind::OpaqueBlock { m, .. } => *m,
            InstructionKind::CpSwapBlock { m, .. } => *m,
            InstructionKind::CmNot { controls } => controls + 1,
            InstructionKind::CmNotK { controls, spacers } => controls + spacers + 1,
        }
    }

    /// Canonical library key. Parametrised kinds are keyed per parameter set
    /// except `LocalU` and `ControlledPhase`, which share one entry each.
    pub fn key(&self) -> String {
        match self {
            InstructionKind::LocalU(_) => "local_u".into(),
            InstructionKind::Cnot => "cnot".into(),
            InstructionKind::ControlledPhase { .. } => "cphase".into(),
            InstructionKind::Swap2 => "swap2".into(),
            InstructionKind::SwapBlock { m } => format!("swap_block:{m}"),
            InstructionKind::QftBlock { m } => format!("qft_block:{m}"),
            InstructionKind::CpSwapBlock { j, m } => format!("cpswap:{j}:{m}"),
            InstructionKind::CmNot { controls } => format!("cmnot:{controls}"),
            InstructionKind::CmNotK { controls, spacers } => format!("cmnotk:{controls}:{spacers}"),
            InstructionKind::OpaqueBlock { label, .. } => format!("opaque:{label}"),
        }
    }

    /// Structural invariants on the kind parameters themselves.
    pub fn validate(&self) -> Result<(), CoreError> {
        match self {
            InstructionKind::ControlledPhase { angle } => {
                if !(*angle > 0.0 && *angle < 2.0 * PI) {
                    return Err(CoreError::invariant(format!(
                        "controlled-phase angle {angle} outside (0, 2*pi)"
                    )));
                }
            }
            InstructionKind::SwapBlock { m }
            | InstructionKind::QftBlock { m }
            | InstructionKind::OpaqueBlock { m, .. } => {
                if *m < 1 {
                    return Err(CoreError::invariant("block size m must be >= 1"));
                }
            }
            InstructionKind::CpSwapBlock { j, m } => {
                if *j < 1 {
                    return Err(CoreError::invariant("cP-SWAP phase index j must be >= 1"));
                }
                if *m < 2 || *m % 2 != 0 {
                    return Err(CoreError::invariant(
                        "cP-SWAP width must be an even block pair",
                    ));
                }
            }
            InstructionKind::CmNot { controls } => {
                if *controls < 1 {
                    return Err(CoreError::invariant("CmNot needs at least one control"));
                }
            }
            InstructionKind::CmNotK { controls, .. } => {
                if *controls < 1 {
                    return Err(CoreError::invariant("CmNotK needs at least one control"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// JSON form used in both the library and circuit schemas:
    /// a kind name plus a parameter object.
    pub fn to_json(&self) -> (String, Value) {
        match self {
            InstructionKind::LocalU(p) => (
                "local_u".into(),
                json!({"phase": p.phase, "zeta": p.zeta, "theta": p.theta, "xi": p.xi}),
            ),
            InstructionKind::Cnot => ("cnot".into(), json!({})),
            InstructionKind::ControlledPhase { angle } => ("cphase".into(), json!({"angle": angle})),
            InstructionKind::Swap2 => ("swap2".into(), json!({})),
            InstructionKind::SwapBlock { m } => ("swap_block".into(), json!({"m": m})),
            InstructionKind::QftBlock { m } => ("qft_block".into(), json!({"m": m})),
            InstructionKind::CpSwapBlock { j, m } => ("cpswap".into(), json!({"j": j, "m": m})),
            InstructionKind::CmNot { controls } => ("cmnot".into(), json!({"controls": controls})),
            InstructionKind::CmNotK { controls, spacers } => (
                "cmnotk".into(),
                json!({"controls": controls, "spacers": spacers}),
            ),
            InstructionKind::OpaqueBlock { label, m } => {
                ("opaque".into(), json!({"label": label, "m": m}))
            }
        }
    }

    pub fn from_json(name: &str, params: &Value) -> Result<Self, CoreError> {
        let obj = params.as_object().cloned().unwrap_or_else(Map::new);
        let get_u32 = |key: &str| -> Result<u32, CoreError> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as u32)
                .ok_or_else(|| CoreError::parse("instruction kind", format!("missing field `{key}` for `{name}`")))
        };
        let get_f64 = |key: &str| -> Result<f64, CoreError> {
            obj.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| CoreError::parse("instruction kind", format!("missing field `{key}` for `{name}`")))
        };
        let kind = match name {
            "local_u" => InstructionKind::LocalU(LocalUParams {
                phase: get_f64("phase").unwrap_or(0.0),
                zeta: get_f64("zeta").unwrap_or(0.0),
                theta: get_f64("theta").unwrap_or(0.0),
                xi: get_f64("xi").unwrap_or(0.0),
            }),
            "cnot" => InstructionKind::Cnot,
            "cphase" => InstructionKind::ControlledPhase { angle: get_f64("angle")? },
            "swap2" => InstructionKind::Swap2,
            "swap_block" => InstructionKind::SwapBlock { m: get_u32("m")? },
            "qft_block" => InstructionKind::QftBlock { m: get_u32("m")? },
            "cpswap" => InstructionKind::CpSwapBlock {
                j: get_u32("j")?,
                m: get_u32("m")?,
            },
            "cmnot" => InstructionKind::CmNot {
                controls: get_u32("controls")?,
            },
            "cmnotk" => InstructionKind::CmNotK {
                controls: get_u32("controls")?,
                spacers: get_u32("spacers")?,
            },
            "opaque" => InstructionKind::OpaqueBlock {
                label: obj
                    .get("label")
                    .and_then(Value::as_str)
                    .unwrap_or("block")
                    .to_string(),
                m: get_u32("m")?,
            },
            other => {
                return Err(CoreError::parse(
                    "instruction kind",
                    format!("unknown kind `{other}`"),
                ))
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for InstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}
