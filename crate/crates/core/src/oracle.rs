//! Query counting in the oracle-function model.
//!
//! An oracle answers a query once; repeating it returns the cached answer and
//! does not count as a new query. Complexity is measured in distinct queries.

use alloc::collections::BTreeMap;

pub trait Oracle {
    type Query: Ord + Clone;
    type Answer: Clone;

    fn answer(&self, query: &Self::Query) -> Self::Answer;
}

#[derive(Debug, Clone)]
pub struct CountingOracle<O: Oracle> {
    inner: O,
    cache: BTreeMap<O::Query, O::Answer>,
    calls: u64,
}

impl<O: Oracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, cache: BTreeMap::new(), calls: 0 }
    }

    pub fn query(&mut self, query: &O::Query) -> O::Answer {
        self.calls += 1;
        if let Some(answer) = self.cache.get(query) {
            return answer.clone();
        }
        let answer = self.inner.answer(query);
        self.cache.insert(query.clone(), answer.clone());
        answer
    }

    pub fn distinct_queries(&self) -> usize {
        self.cache.len()
    }

    /// Calls including repeats.
    pub fn total_calls(&self) -> u64 {
        self.calls
    }

    pub fn has_seen(&self, query: &O::Query) -> bool {
        self.cache.contains_key(query)
    }

    pub fn seen(&self) -> impl Iterator<Item = (&O::Query, &O::Answer)> {
        self.cache.iter()
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    /// Forget all answers and counters.
    pub fn reset(&mut self) {
        self.cache.clear();
        self.calls = 0;
    }
}
