package m;

public class Impl implements Good {
  public void ok() {}
}
