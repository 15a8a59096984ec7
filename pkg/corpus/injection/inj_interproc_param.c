void inj_interproc_param_run(int v) {
    exec(v);
}
int inj_interproc_param() {
    int x = input();
    inj_interproc_param_run(x);
    return 0;
}
