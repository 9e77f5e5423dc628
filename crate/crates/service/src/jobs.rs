use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use squab::benchmark::{Benchmark, BenchmarkError, Control};
use squab::{DualSurface, Surface, SweepConfig, SweepResult};
use tokio::sync::Semaphore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
}

impl fmt::Display for JobState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JobState::Queued => "queued",
            JobState::Running => "running",
            JobState::Done => "done",
            JobState::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Progress {
    pub completed: u64,
    pub total: u64,
}

/// What `GET /api/benchmarks/{id}` returns.
#[derive(Debug, Clone, Serialize)]
pub struct JobView {
    pub id: String,
    pub state: JobState,
    pub progress: Progress,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Job {
    state: JobState,
    total: u64,
    progress: Arc<AtomicU64>,
    cancel: Arc<AtomicBool>,
    result: Option<Arc<SweepResult>>,
    error: Option<String>,
}

impl Job {
    fn view(&self, id: &str) -> JobView {
        JobView {
            id: id.to_string(),
            state: self.state,
            progress: Progress {
                completed: self.progress.load(Ordering::Relaxed).min(self.total),
                total: self.total,
            },
            error: self.error.clone(),
        }
    }
}

/// In-memory job table. All writes go through the mutex; the worker thread
/// only ever moves a job forward from `queued` or `running`.
#[derive(Clone)]
pub struct JobStore {
    jobs: Arc<Mutex<HashMap<String, Job>>>,
    slots: Arc<Semaphore>,
}

impl JobStore {
    pub fn new(max_jobs: usize) -> JobStore {
        JobStore {
            jobs: Arc::default(),
            slots: Arc::new(Semaphore::new(max_jobs.max(1))),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<String, Job>> {
        self.jobs
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    /// Queues a sweep and returns its id. Must be called inside a tokio runtime.
    pub fn submit(
        &self,
        surface: Surface,
        dual: DualSurface,
        config: SweepConfig,
        workers: usize,
    ) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let progress = Arc::new(AtomicU64::new(0));
        let cancel = Arc::new(AtomicBool::new(false));
        self.lock().insert(
            id.clone(),
            Job {
                state: JobState::Queued,
                total: config.total_trials(),
                progress: progress.clone(),
                cancel: cancel.clone(),
                result: None,
                error: None,
            },
        );
        let store = self.clone();
        let job_id = id.clone();
        tokio::spawn(async move {
            let Ok(_permit) = store.slots.clone().acquire_owned().await else {
                return;
            };
            if !store.advance(&job_id, JobState::Queued, |job| {
                job.state = JobState::Running
            }) {
                return;
            }
            let outcome = tokio::task::spawn_blocking(move || {
                let bench = Benchmark::new(&surface, &dual, workers)?;
                let control = Control {
                    progress: Some(&progress),
                    cancel: Some(&cancel),
                };
                bench.run_sweep(&config, control)
            })
            .await;
            store.advance(&job_id, JobState::Running, |job| match outcome {
                Ok(Ok(result)) => {
                    job.state = JobState::Done;
                    job.result = Some(Arc::new(result));
                }
                Ok(Err(err)) => {
                    job.state = JobState::Failed;
                    job.error = Some(err.to_string());
                }
                Err(panic) => {
                    job.state = JobState::Failed;
                    job.error = Some(format!("worker crashed: {panic}"));
                }
            });
        });
        id
    }

    /// Applies `update` if the job still exists and is in state `from`.
    fn advance(&self, id: &str, from: JobState, update: impl FnOnce(&mut Job)) -> bool {
        match self.lock().get_mut(id) {
            Some(job) if job.state == from => {
                update(job);
                true
            }
            _ => false,
        }
    }

    pub fn view(&self, id: &str) -> Option<JobView> {
        self.lock().get(id).map(|job| job.view(id))
    }

    /// `Ok(result)` for finished jobs, `Err(view)` for all others.
    pub fn result(&self, id: &str) -> Option<Result<Arc<SweepResult>, JobView>> {
        self.lock()
            .get(id)
            .map(|job| job.result.clone().ok_or_else(|| job.view(id)))
    }

    /// Cancels a live job (returning its new view) or forgets a finished one.
    pub fn delete(&self, id: &str) -> Option<Option<JobView>> {
        let mut jobs = self.lock();
        let job = jobs.get_mut(id)?;
        match job.state {
            JobState::Queued | JobState::Running => {
                job.cancel.store(true, Ordering::Relaxed);
                job.state = JobState::Failed;
                job.error = Some(BenchmarkError::Cancelled.to_string());
                Some(Some(job.view(id)))
            }
            JobState::Done | JobState::Failed => {
                jobs.remove(id);
                Some(None)
            }
        }
    }
}
