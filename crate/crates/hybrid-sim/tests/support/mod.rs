pub mod sticky;
