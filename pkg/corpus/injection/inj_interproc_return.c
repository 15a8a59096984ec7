int inj_interproc_return_get() {
    return input();
}
int inj_interproc_return() {
    int x = inj_interproc_return_get();
    exec(x);
    return 0;
}
