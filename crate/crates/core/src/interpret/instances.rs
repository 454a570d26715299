use std::collections::BTreeMap;

use crate::kexpr::{Name, BASE_TYPES, CLASSES};

/// Stand-in for type-class resolution: `(class, carrier) ↦ instance`.
#[derive(Debug, Clone)]
pub struct InstanceTable {
    map: BTreeMap<(Name, Name), Name>,
}

impl InstanceTable {
    pub fn empty() -> InstanceTable {
        InstanceTable { map: BTreeMap::new() }
    }

    /// Every built-in class at `real`, `int` and `nat`, named `real.has_add`
    /// and so on.
    pub fn builtin() -> InstanceTable {
        let mut t = InstanceTable::empty();
        for class in CLASSES {
            for ty in BASE_TYPES {
                t.register(class.into(), ty.into(), Name::parse(&format!("{ty}.{class}")).unwrap());
            }
        }
        t
    }

    pub fn register(&mut self, class: Name, carrier: Name, instance: Name) {
        self.map.insert((class, carrier), instance);
    }

    pub fn lookup(&self, class: &Name, carrier: &Name) -> Option<&Name> {
        self.map.get(&(class.clone(), carrier.clone()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl Default for InstanceTable {
    fn default() -> Self {
        InstanceTable::builtin()
    }
}
