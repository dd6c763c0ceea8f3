use fixedbitset::FixedBitSet;

pub(crate) fn full(len: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(len);
    set.insert_range(..);
    set
}

pub(crate) fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(len);
    set.extend(indices);
    set
}

pub(crate) fn to_vec(set: &FixedBitSet) -> Vec<usize> {
    set.ones().collect()
}
