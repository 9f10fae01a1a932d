use std::collections::HashMap;

use super::{FinCategory, RawCategory, RawMorphism};
use crate::error::{Error, Result};

/// Builds a [`FinCategory`] from named maps between finite carriers.
/// Composition is function composition, looked up among the declared maps;
/// identities are added automatically as `id{Object}`.
#[derive(Clone, Debug, Default)]
pub struct ConcreteBuilder {
    objects: Vec<(String, usize)>,
    maps: Vec<(String, String, String, Vec<usize>)>,
}

impl ConcreteBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str, carrier: usize) -> Self {
        self.objects.push((name.to_string(), carrier));
        self
    }

    pub fn map(mut self, name: &str, dom: &str, cod: &str, images: &[usize]) -> Self {
        self.maps
            .push((name.to_string(), dom.to_string(), cod.to_string(), images.to_vec()));
        self
    }

    pub fn build(self) -> Result<FinCategory> {
        let carrier: HashMap<&str, usize> =
            self.objects.iter().map(|(n, s)| (n.as_str(), *s)).collect();
        let mut all: Vec<(String, String, String, Vec<usize>)> = self
            .objects
            .iter()
            .map(|(n, s)| (format!("id{n}"), n.clone(), n.clone(), (0..*s).collect()))
            .collect();
        all.extend(self.maps);

        let mut by_value: HashMap<(&str, &str, &[usize]), &str> = HashMap::new();
        for (name, dom, cod, images) in &all {
            let (Some(&ds), Some(&cs)) = (carrier.get(dom.as_str()), carrier.get(cod.as_str())) else {
                return Err(Error::invalid(format!("map `{name}` has an unknown endpoint")));
            };
            if images.len() != ds || images.iter().any(|&x| x >= cs) {
                return Err(Error::invalid(format!("map `{name}` is not a function {dom} → {cod}")));
            }
            if let Some(prev) = by_value.insert((dom, cod, images), name) {
                return Err(Error::invalid(format!("maps `{prev}` and `{name}` coincide")));
            }
        }

        let mut raw = RawCategory::default();
        for (n, _) in &self.objects {
            raw.objects.push(n.clone());
            raw.identities.insert(n.clone(), format!("id{n}"));
        }
        for (name, dom, cod, _) in &all {
            raw.morphisms.push(RawMorphism {
                cod: cod.clone(),
                dom: dom.clone(),
                id: name.clone(),
            });
        }
        for (gn, gd, gc, gi) in &all {
            for (fname, fd, fc, fi) in &all {
                if fc != gd {
                    continue;
                }
                let composite: Vec<usize> = fi.iter().map(|&x| gi[x]).collect();
                let gf = by_value
                    .get(&(fd.as_str(), gc.as_str(), composite.as_slice()))
                    .ok_or_else(|| {
                        Error::invalid(format!("`{gn}·{fname}` is not among the declared maps"))
                    })?;
                raw.compose.push([gn.clone(), fname.clone(), gf.to_string()]);
            }
        }
        FinCategory::from_raw(raw)
    }
}
