//! Action-value network: the policy's conv trunk with the action
//! concatenated before the dense layers.

use rand::Rng;
use uanav_nn::{Conv1d, Dense, Graph, NnError, ParameterSet, Var};
use uanav_num::Real;

use crate::policy::{PolicyArch, ACTION_DIM, AUX_DIM};

#[derive(Debug, Clone)]
pub struct CriticNet {
    pub prefix: String,
    pub arch: PolicyArch,
    conv1: Conv1d,
    conv2: Conv1d,
    fc1: Dense,
    fc2: Dense,
    head: Dense,
}

impl CriticNet {
    pub fn new(prefix: &str, arch: PolicyArch) -> Self {
        let conv1 = Conv1d::new(&format!("{prefix}/conv1"), 3, arch.conv1_ch, 5, 2);
        let len1 = conv1.out_len(arch.beams);
        let conv2 = Conv1d::new(&format!("{prefix}/conv2"), arch.conv1_ch, arch.conv2_ch, 3, 2);
        let len2 = conv2.out_len(len1);
        let flat = arch.conv2_ch * len2;
        Self {
            prefix: prefix.to_string(),
            arch,
            conv1,
            conv2,
            fc1: Dense::new(&format!("{prefix}/fc1"), flat + AUX_DIM + ACTION_DIM, arch.hidden),
            fc2: Dense::new(&format!("{prefix}/fc2"), arch.hidden, arch.hidden),
            head: Dense::new(&format!("{prefix}/head"), arch.hidden, 1),
        }
    }

    pub fn init<T: Real>(
        &self,
        params: &mut ParameterSet<T>,
        rng: &mut impl Rng,
    ) -> Result<(), NnError> {
        self.conv1.init(params, rng)?;
        self.conv2.init(params, rng)?;
        self.fc1.init(params, rng)?;
        self.fc2.init(params, rng)?;
        self.head.init(params, rng)
    }

    /// Q(s, a): channels [B,3,N], aux [B,4], action [B,2] → [B,1].
    pub fn forward<T: Real>(
        &self,
        g: &mut Graph<T>,
        channels: Var,
        aux: Var,
        action: Var,
    ) -> Result<Var, NnError> {
        let batch = g.value(channels).shape()[0];
        let c1 = self.conv1.forward(g, channels)?;
        let c1 = g.tape.relu(c1);
        let c2 = self.conv2.forward(g, c1)?;
        let c2 = g.tape.relu(c2);
        let flat_dim = g.value(c2).numel() / batch;
        let flat = g.tape.reshape(c2, vec![batch, flat_dim]);
        let joined = g.tape.concat_cols(&[flat, aux, action]);
        let h = self.fc1.forward(g, joined)?;
        let h = g.tape.relu(h);
        let h = self.fc2.forward(g, h)?;
        let h = g.tape.relu(h);
        self.head.forward(g, h)
    }
}
